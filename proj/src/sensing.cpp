#include "isac/sensing.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace isac {

namespace {

void check_dims(const CorrelationMatrix& r_target, int N, int L, const char* where) {
  if (N < 1 || L < 1) throw ModelError(std::string(where) + ": N and L must be >= 1");
  if (L < r_target.dim() || L < N) {
    throw ModelError(std::string(where) + ": requires L >= M and L >= N");
  }
}

void check_power(double p_s, const char* where) {
  if (!(p_s >= 0.0) || !std::isfinite(p_s)) {
    throw ModelError(std::string(where) + ": p_s must be finite and nonnegative");
  }
}

std::vector<double> eigenvalues_of(const CorrelationMatrix& r) {
  const EigenSystem es = hermitian_eig(r.inner);
  std::vector<double> out(es.eigenvalues.data(), es.eigenvalues.data() + es.eigenvalues.size());
  for (double v : out) {
    if (!(v > 0.0)) throw ModelError("sensing: target correlation must be positive definite");
  }
  return out;
}

// (N * share / L) * sum_m log2(1 + lambda_m s_m / noise), water-filled.
SensingRate waterfilled_rate(const CorrelationMatrix& r_target, int N, int L, double p_s,
                             double noise, double share) {
  const std::vector<double> lambda = eigenvalues_of(r_target);
  const std::vector<double> noise_vec(lambda.size(), noise);
  SensingRate out;
  out.allocation = waterfill(lambda, noise_vec, p_s);
  out.rate = share * N / static_cast<double>(L) *
             waterfill_objective(lambda, noise_vec, out.allocation.allocation);
  return out;
}

}  // namespace

void SensingScenario::validate() const {
  check_dims(r_target, N, L, "SensingScenario");
  check_power(p_s, "SensingScenario");
  if (!(sigma2 >= 1.0) || !std::isfinite(sigma2)) {
    throw ModelError("SensingScenario: sigma2 must be >= 1");
  }
}

Waveform make_waveform(const CMatrix& s) {
  return Waveform{s, HermitianMatrix::from(s * s.adjoint())};
}

double sigma2_effective(const CorrelationMatrix& r_target, const MeanInputCovariance& sigma) {
  if (sigma.sigma_matrix.dim() != r_target.dim()) {
    throw ModelError("sigma2_effective: dimension mismatch");
  }
  const EigenSystem es = hermitian_eig(sigma.sigma_matrix);
  if (es.eigenvalues(es.eigenvalues.size() - 1) < -kPsdTolerance) {
    throw ModelError("sigma2_effective: mean covariance is not PSD");
  }
  const double tr = (r_target.inner.matrix() * sigma.sigma_matrix.matrix()).trace().real();
  return 1.0 + std::max(tr, 0.0);
}

double sensing_mi(const SensingScenario& scenario, const Waveform& waveform) {
  scenario.validate();
  const CMatrix& s = waveform.s_matrix;
  if (s.rows() != scenario.r_target.dim() || s.cols() != scenario.L) {
    throw ModelError("sensing_mi: waveform must be M x L");
  }
  if (waveform.gram.trace() > scenario.p_s + 1e-9) {
    throw ModelError("sensing_mi: waveform exceeds the sensing power budget");
  }
  const CMatrix inner = CMatrix::Identity(scenario.L, scenario.L) +
                        s.adjoint() * scenario.r_target.inner.matrix() * s / scenario.sigma2;
  return scenario.N * log2det_hpd(inner);
}

SensingRate dl_sr(const SensingScenario& scenario) {
  scenario.validate();
  return waterfilled_rate(scenario.r_target, scenario.N, scenario.L, scenario.p_s,
                          scenario.sigma2, 1.0);
}

SensingRate ul_sr(const CorrelationMatrix& r_target, int N, int L, double p_s) {
  check_dims(r_target, N, L, "ul_sr");
  check_power(p_s, "ul_sr");
  return waterfilled_rate(r_target, N, L, p_s, 1.0, 1.0);
}

Waveform build_waveform(const CorrelationMatrix& r_target, const WaterfillSolution& alloc,
                        int L) {
  const Eigen::Index m = r_target.dim();
  if (L < m) throw ModelError("build_waveform: requires L >= M");
  if (static_cast<Eigen::Index>(alloc.allocation.size()) != m) {
    throw ModelError("build_waveform: allocation length must equal M");
  }
  const EigenSystem es = hermitian_eig(r_target.inner);
  CMatrix dft(m, L);
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  for (Eigen::Index r = 0; r < m; ++r) {
    for (int c = 0; c < L; ++c) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(r * c) / L;
      dft(r, c) = std::polar(scale, angle);
    }
  }
  RVector amplitude(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    if (!(alloc.allocation[k] >= 0.0)) throw ModelError("build_waveform: negative allocation");
    amplitude(k) = std::sqrt(alloc.allocation[k]);
  }
  const CMatrix s = es.basis * amplitude.asDiagonal() * dft;
  return Waveform{s, HermitianMatrix::from(s * s.adjoint())};
}

HighSnrRate sr_highsnr(const CorrelationMatrix& r_target, int N, int L, double p_s,
                       double sigma2) {
  check_dims(r_target, N, L, "sr_highsnr");
  if (!(p_s > 0.0)) throw ModelError("sr_highsnr: p_s must be positive");
  if (!(sigma2 > 0.0)) throw ModelError("sr_highsnr: sigma2 must be positive");
  const std::vector<double> lambda = eigenvalues_of(r_target);
  const double M = static_cast<double>(lambda.size());
  double mean_log = 0.0;
  for (double l : lambda) mean_log += std::log2(l / (M * sigma2));
  mean_log /= M;

  HighSnrRate out;
  out.rate = N * M / L * (std::log2(p_s) + mean_log);
  const std::vector<double> noise(lambda.size(), sigma2);
  out.valid = waterfill(lambda, noise, p_s).active_set.size() == lambda.size();
  return out;
}

double fdsac_sr(const CorrelationMatrix& r_target, int N, int L, double p_s, double alpha) {
  check_dims(r_target, N, L, "fdsac_sr");
  check_power(p_s, "fdsac_sr");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ModelError("fdsac_sr: alpha must lie in [0, 1]");
  if (alpha == 1.0) return 0.0;
  return waterfilled_rate(r_target, N, L, p_s, 1.0 - alpha, 1.0 - alpha).rate;
}

}  // namespace isac
