#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace isac::oracle {

double waterfill_bits(std::span<const double> gains, std::span<const double> noise,
                      std::span<const double> x) {
  double bits = 0.0;
  for (std::size_t m = 0; m < gains.size(); ++m) bits += std::log2(1.0 + gains[m] * x[m] / noise[m]);
  return bits;
}

namespace {

// Enumerates every composition of `units` into `parts` nonnegative integers.
void for_each_composition(int units, int parts, std::vector<int>& cur,
                          const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(units);
    visit(cur);
    cur.pop_back();
    return;
  }
  for (int u = 0; u <= units; ++u) {
    cur.push_back(u);
    for_each_composition(units - u, parts, cur, visit);
    cur.pop_back();
  }
}

}  // namespace

double grid_search_waterfill(std::span<const double> gains, std::span<const double> noise,
                             double budget, double resolution) {
  const int m = static_cast<int>(gains.size());
  std::vector<double> x(m, 0.0);
  if (budget <= 0.0) return waterfill_bits(gains, noise, x);

  auto eval = [&](const std::vector<int>& units, int total) {
    for (int i = 0; i < m; ++i) x[i] = budget * units[i] / total;
    return waterfill_bits(gains, noise, x);
  };

  // Coarse exhaustive pass.
  int total = 16;
  std::vector<int> best_units;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> scratch;
  for_each_composition(total, m, scratch, [&](const std::vector<int>& u) {
    const double v = eval(u, total);
    if (v > best) {
      best = v;
      best_units = u;
    }
  });

  // Halve the step and hill-climb over a +-2 neighbourhood until the step
  // reaches the requested resolution.
  while (budget / total > resolution) {
    total *= 2;
    for (int& u : best_units) u *= 2;
    best = eval(best_units, total);
    bool improved = true;
    while (improved) {
      improved = false;
      std::vector<int> offset(m - 1, -2);
      for (;;) {
        std::vector<int> cand = best_units;
        int moved = 0;
        bool ok = true;
        for (int i = 0; i < m - 1; ++i) {
          cand[i] += offset[i];
          moved += offset[i];
          if (cand[i] < 0) ok = false;
        }
        cand[m - 1] -= moved;
        if (cand[m - 1] < 0) ok = false;
        if (ok) {
          const double v = eval(cand, total);
          if (v > best + 1e-15) {
            best = v;
            best_units = cand;
            improved = true;
          }
        }
        int i = 0;
        while (i < m - 1 && ++offset[i] > 2) offset[i++] = -2;
        if (i == m - 1) break;
      }
    }
  }
  return best;
}

double dual_mac_bits(const Eigen::MatrixXcd& h, std::span<const double> powers) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(h.rows(), h.rows());
  for (Eigen::Index k = 0; k < h.cols(); ++k) a += powers[k] * h.col(k) * h.col(k).adjoint();
  return std::log2(std::abs(a.determinant()));
}

double best_random_dual_mac(const Eigen::MatrixXcd& h, double p_c, int samples,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  const auto k = static_cast<std::size_t>(h.cols());
  std::vector<double> w(k + 1);
  std::vector<double> p(k);
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    double sum = 0.0;
    for (double& v : w) sum += (v = expo(rng));
    for (std::size_t i = 0; i < k; ++i) p[i] = p_c * w[i] / sum;
    best = std::max(best, dual_mac_bits(h, p));
  }
  return best;
}

WishartEstimate wishart_logdet(int M, int K, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd h(M, K);
  double sum = 0.0;
  double sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    for (int c = 0; c < K; ++c) {
      for (int r = 0; r < M; ++r) {
        const double re = normal(rng);
        const double im = normal(rng);
        h(r, c) = {re, im};
      }
    }
    const double v = std::log2(std::abs((h.adjoint() * h).determinant()));
    sum += v;
    sq += v * v;
  }
  WishartEstimate est;
  est.mean = sum / trials;
  est.std_error = std::sqrt(std::max(0.0, sq / trials - est.mean * est.mean) / trials);
  return est;
}

double best_random_waveform_rate(const Eigen::MatrixXcd& r_target, int N, int L, double sigma2,
                                 double p_s, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Index m = r_target.rows();
  Eigen::MatrixXcd s(m, L);
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    for (int c = 0; c < L; ++c) {
      for (Eigen::Index r = 0; r < m; ++r) {
        const double re = normal(rng);
        const double im = normal(rng);
        s(r, c) = {re, im};
      }
    }
    // Every other draw is rank one so that beam-focused waveforms are explored too.
    if (i % 2 == 1) s = (s.col(0) * s.row(0)).eval();
    const double power = p_s * unit(rng);
    const double tr = (s * s.adjoint()).trace().real();
    if (!(tr > 0.0)) continue;
    s *= std::sqrt(power / tr);
    const Eigen::MatrixXcd inner =
        Eigen::MatrixXcd::Identity(L, L) + s.adjoint() * r_target * s / sigma2;
    best = std::max(best, N * std::log2(std::abs(inner.determinant())) / L);
  }
  return best;
}

}  // namespace isac::oracle
