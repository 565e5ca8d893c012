#include "isac/downlink.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

namespace isac {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_budget(double p_c, const char* where) {
  if (!(p_c >= 0.0) || !std::isfinite(p_c)) {
    throw ModelError(std::string(where) + ": p_c must be finite and nonnegative");
  }
}

// Euclidean projection onto {x >= 0, sum x = total}.
void project_onto_simplex(std::vector<double>& x, double total) {
  std::vector<double> u = x;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double t = (cumulative - total) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  for (double& v : x) v = std::max(v - theta, 0.0);
}

CMatrix mac_covariance(const CMatrix& h_d, std::span<const double> powers) {
  const Eigen::Index m = h_d.rows();
  CMatrix a = CMatrix::Identity(m, m);
  for (Eigen::Index k = 0; k < h_d.cols(); ++k) {
    a.noalias() += powers[k] * h_d.col(k) * h_d.col(k).adjoint();
  }
  return a;
}

// Objective (bits) and gradient d/dp_k = h_k^H A^{-1} h_k / ln 2.
double objective_and_gradient(const CMatrix& h_d, std::span<const double> powers,
                              std::vector<double>& grad) {
  const CMatrix a = mac_covariance(h_d, powers);
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("dual MAC: covariance not PD");
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) logdet += std::log(llt.matrixLLT()(i, i).real());
  const CMatrix x = llt.solve(h_d);
  grad.resize(h_d.cols());
  for (Eigen::Index k = 0; k < h_d.cols(); ++k) {
    grad[k] = h_d.col(k).dot(x.col(k)).real() / kLn2;
  }
  return 2.0 * logdet / kLn2;
}

double frank_wolfe_gap(std::span<const double> grad, std::span<const double> p, double p_c) {
  double best = 0.0;
  double inner = 0.0;
  for (std::size_t k = 0; k < grad.size(); ++k) {
    best = std::max(best, grad[k]);
    inner += grad[k] * p[k];
  }
  return std::max(0.0, p_c * best - inner);
}

}  // namespace

double dual_mac_objective(const CMatrix& h_d, std::span<const double> powers) {
  if (static_cast<Eigen::Index>(powers.size()) != h_d.cols()) {
    throw ModelError("dual_mac_objective: one power per user required");
  }
  return log2det_hpd(mac_covariance(h_d, powers));
}

DualMacSolution solve_dual_mac(const CMatrix& h_d, double p_c) {
  check_budget(p_c, "dual_mac_power_alloc");
  const auto users = static_cast<std::size_t>(h_d.cols());
  if (users == 0) throw ModelError("dual_mac_power_alloc: channel has no users");

  DualMacSolution sol;
  sol.allocation.sum_budget = p_c;
  std::vector<double> p(users, p_c / static_cast<double>(users));
  if (p_c == 0.0) {
    sol.allocation.powers = p;
    return sol;
  }

  // The objective increases in every p_k, so the optimum uses the whole
  // budget and the search stays on the face sum p = p_c.
  std::vector<double> grad;
  double f = objective_and_gradient(h_d, p, grad);
  double gap = frank_wolfe_gap(grad, p, p_c);
  double step = p_c / std::max(*std::max_element(grad.begin(), grad.end()), 1e-300);
  std::vector<double> trial(users);
  std::vector<double> trial_grad;
  std::vector<double> prev_p;
  std::vector<double> prev_grad;
  int it = 0;
  for (; it < kDualMacMaxIterations && gap > kDualMacGapBits; ++it) {
    bool accepted = false;
    double f_new = f;
    for (int halvings = 0; halvings < 80; ++halvings) {
      for (std::size_t k = 0; k < users; ++k) trial[k] = p[k] + step * grad[k];
      project_onto_simplex(trial, p_c);
      double ascent = 0.0;
      for (std::size_t k = 0; k < users; ++k) ascent += grad[k] * (trial[k] - p[k]);
      f_new = objective_and_gradient(h_d, trial, trial_grad);
      if (f_new >= f + 1e-4 * ascent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    prev_p = p;
    prev_grad = grad;
    p = trial;
    grad = trial_grad;
    const double improvement = f_new - f;
    f = f_new;
    gap = frank_wolfe_gap(grad, p, p_c);
    if (improvement <= 0.0) break;

    // Barzilai-Borwein step for the next iteration (curvature is negative
    // for a concave objective, hence the sign flip).
    double ss = 0.0;
    double sy = 0.0;
    for (std::size_t k = 0; k < users; ++k) {
      const double s = p[k] - prev_p[k];
      const double y = grad[k] - prev_grad[k];
      ss += s * s;
      sy += s * y;
    }
    step = (sy < 0.0 && ss > 0.0) ? ss / -sy : step * 2.0;
  }
  sol.allocation.powers = std::move(p);
  sol.objective = f;
  sol.gap = gap;
  sol.iterations = it;
  return sol;
}

PowerAllocation dual_mac_power_alloc(const CMatrix& h_d, double p_c) {
  return solve_dual_mac(h_d, p_c).allocation;
}

double dl_sum_rate(const CMatrix& h_d, double p_c) {
  check_budget(p_c, "dl_sum_rate");
  if (p_c == 0.0) return 0.0;
  return solve_dual_mac(h_d, p_c).objective;
}

std::vector<HermitianMatrix> mac_to_bc_user_covariances(const CMatrix& h_d,
                                                        const PowerAllocation& alloc) {
  const Eigen::Index users = h_d.cols();
  const Eigen::Index m = h_d.rows();
  if (static_cast<Eigen::Index>(alloc.powers.size()) != users) {
    throw ModelError("mac_to_bc_covariance: allocation size does not match user count");
  }
  double total = 0.0;
  for (double v : alloc.powers) {
    if (!(v >= 0.0)) throw ModelError("mac_to_bc_covariance: negative power");
    total += v;
  }
  if (total > alloc.sum_budget + 1e-9) {
    throw ModelError("mac_to_bc_covariance: allocation exceeds its sum budget");
  }

  std::vector<HermitianMatrix> covs;
  covs.reserve(users);
  CMatrix earlier = CMatrix::Zero(m, m);  // sum of BC covariances of users j < k
  for (Eigen::Index k = 0; k < users; ++k) {
    const double p = alloc.powers[k];
    const CVector h = h_d.col(k);
    // MAC interference-plus-noise seen by user k: users j > k are decoded later.
    CMatrix b = CMatrix::Identity(m, m);
    for (Eigen::Index j = k + 1; j < users; ++j) {
      b.noalias() += alloc.powers[j] * h_d.col(j) * h_d.col(j).adjoint();
    }
    const CVector v = b.llt().solve(h);
    const double quad = h.dot(v).real();
    CMatrix cov = CMatrix::Zero(m, m);
    if (p > 0.0 && quad > 0.0) {
      const double a = 1.0 + h.dot(earlier * h).real();
      const double q = p * a * v.squaredNorm() / quad;
      const CVector u = v / v.norm();
      cov = q * u * u.adjoint();
    }
    covs.push_back(HermitianMatrix::from(cov));
    earlier += covs.back().matrix();
  }
  return covs;
}

HermitianMatrix mac_to_bc_covariance(const CMatrix& h_d, const PowerAllocation& alloc) {
  const auto covs = mac_to_bc_user_covariances(h_d, alloc);
  CMatrix sum = CMatrix::Zero(h_d.rows(), h_d.rows());
  for (const auto& c : covs) sum += c.matrix();
  return HermitianMatrix::from(sum);
}

double bc_dpc_sum_rate(const CMatrix& h_d, std::span<const HermitianMatrix> user_covariances) {
  if (static_cast<Eigen::Index>(user_covariances.size()) != h_d.cols()) {
    throw ModelError("bc_dpc_sum_rate: one covariance per user required");
  }
  double rate = 0.0;
  CMatrix earlier = CMatrix::Zero(h_d.rows(), h_d.rows());
  for (Eigen::Index k = 0; k < h_d.cols(); ++k) {
    const CVector h = h_d.col(k);
    const double signal = h.dot(user_covariances[k].matrix() * h).real();
    const double interference = h.dot(earlier * h).real();
    rate += std::log2(1.0 + signal / (1.0 + interference));
    earlier += user_covariances[k].matrix();
  }
  return rate;
}

MeanInputCovariance estimate_mean_covariance(const SimConfig& cfg) {
  cfg.validate();
  MeanInputCovariance out;
  out.p_c = cfg.p_c;
  out.trials_used = cfg.sigma_trials;
  if (cfg.p_c == 0.0) {
    out.sigma_matrix = HermitianMatrix::zero(cfg.M);
    return out;
  }
  const ChannelSampler sampler(cfg.user_correlation());
  const std::int64_t blocks = (cfg.sigma_trials + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<CMatrix> partial(blocks, CMatrix::Zero(cfg.M, cfg.M));
  parallel_for(blocks, cfg.threads, [&](std::int64_t b) {
    const std::int64_t lo = b * kMonteCarloBlock;
    const std::int64_t hi = std::min(cfg.sigma_trials, lo + kMonteCarloBlock);
    for (std::int64_t t = lo; t < hi; ++t) {
      const CMatrix h = sampler.sample(cfg.K, static_cast<std::uint64_t>(t), cfg.seed);
      partial[b] += mac_to_bc_covariance(h, dual_mac_power_alloc(h, cfg.p_c)).matrix();
    }
  });
  CMatrix sum = CMatrix::Zero(cfg.M, cfg.M);
  for (const auto& part : partial) sum += part;
  out.sigma_matrix = HermitianMatrix::from(sum / static_cast<double>(cfg.sigma_trials));
  return out;
}

namespace {

using CacheKey = std::tuple<int, int, std::uint64_t, std::uint64_t, std::int64_t, std::uint64_t>;

std::uint64_t bits_of(double v) {
  std::uint64_t out;
  std::memcpy(&out, &v, sizeof out);
  return out;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<CacheKey, MeanInputCovariance>& cache_store() {
  static std::map<CacheKey, MeanInputCovariance> store;
  return store;
}

}  // namespace

MeanInputCovariance cached_mean_covariance(const SimConfig& cfg) {
  const CacheKey key{cfg.M, cfg.K, bits_of(cfg.rho_cu), bits_of(cfg.p_c), cfg.sigma_trials,
                     cfg.seed};
  {
    std::lock_guard lock(cache_mutex());
    auto it = cache_store().find(key);
    if (it != cache_store().end()) return it->second;
  }
  MeanInputCovariance value = estimate_mean_covariance(cfg);
  std::lock_guard lock(cache_mutex());
  return cache_store().emplace(key, std::move(value)).first->second;
}

void clear_mean_covariance_cache() {
  std::lock_guard lock(cache_mutex());
  cache_store().clear();
}

MonteCarloEstimate dl_outage_prob(const SimConfig& cfg, double rate_target, double p_c) {
  return dl_outage_prob_fdsac(cfg, rate_target, 1.0, p_c);
}

MonteCarloEstimate dl_outage_prob_fdsac(const SimConfig& cfg, double rate_target, double alpha,
                                        double p_c) {
  cfg.validate();
  check_budget(p_c, "dl_outage_prob");
  if (!(rate_target >= 0.0)) throw ModelError("dl_outage_prob: target rate must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ModelError("dl_outage_prob: alpha must lie in [0, 1]");
  const ChannelSampler sampler(cfg.user_correlation());
  AdaptivePolicy policy;
  policy.min_events = cfg.outage_min_events;
  policy.max_trials = cfg.outage_max_trials;
  policy.min_trials = std::min(policy.min_trials, cfg.outage_max_trials);
  if (rate_target == 0.0 || p_c == 0.0 || alpha == 0.0) {
    // Deterministic outcome: skip the channel draws.
    return mc_probability(policy, cfg.seed, cfg.threads,
                          [&](std::int64_t) { return rate_target > 0.0; });
  }
  // alpha * f(p_c / alpha) < R  <=>  f(p_c / alpha) < R / alpha.
  const double power = p_c / alpha;
  const double target = rate_target / alpha;
  const std::vector<double> equal(cfg.K, power / cfg.K);
  return mc_probability(policy, cfg.seed, cfg.threads, [&](std::int64_t t) {
    const CMatrix h = sampler.sample(cfg.K, static_cast<std::uint64_t>(t), cfg.seed);
    // Equal powers bound the optimum from below; giving every user the whole
    // budget bounds it from above. Only ambiguous draws need the solver.
    if (dual_mac_objective(h, equal) >= target) return false;
    const CMatrix upper = CMatrix::Identity(cfg.M, cfg.M) + power * h * h.adjoint();
    if (log2det_hpd(upper) < target) return true;
    return dl_sum_rate(h, power) < target;
  });
}

MonteCarloEstimate dl_ecr(const SimConfig& cfg, double p_c) {
  return dl_ecr_fdsac(cfg, 1.0, p_c);
}

MonteCarloEstimate dl_ecr_fdsac(const SimConfig& cfg, double alpha, double p_c) {
  cfg.validate();
  check_budget(p_c, "dl_ecr");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ModelError("dl_ecr_fdsac: alpha must lie in [0, 1]");
  const ChannelSampler sampler(cfg.user_correlation());
  return mc_mean(cfg.trials, cfg.seed, cfg.threads, [&](std::int64_t t) {
    if (alpha == 0.0 || p_c == 0.0) return 0.0;
    const CMatrix h = sampler.sample(cfg.K, static_cast<std::uint64_t>(t), cfg.seed);
    return alpha * dl_sum_rate(h, p_c / alpha);
  });
}

double ed_closed_form_iid(int M, int K) {
  if (K < 1) throw ModelError("ed_closed_form_iid: K must be >= 1");
  if (M < K) throw ModelError("ed_closed_form_iid: requires M >= K");
  double total = 0.0;
  for (int t = 0; t < K; ++t) {
    double harmonic = 0.0;
    for (int a = 1; a <= M - t - 1; ++a) harmonic += 1.0 / a;
    total += harmonic - std::numbers::egamma;
  }
  return total / kLn2;
}

double dl_ecr_asymptote(double p_c, int K, double e_d) {
  if (K < 1) throw ModelError("dl_ecr_asymptote: K must be >= 1");
  if (!(p_c > 0.0)) throw ModelError("dl_ecr_asymptote: p_c must be positive");
  return K * std::log2(p_c / K) + e_d;
}

}  // namespace isac
