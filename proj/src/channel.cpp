#include "isac/channel.hpp"

#include <cmath>
#include <random>
#include <string>

namespace isac {

CorrelationMatrix make_correlation(const HermitianMatrix& m, CorrelationLabel label) {
  const EigenSystem es = hermitian_eig(m);
  const double smallest = es.eigenvalues(es.eigenvalues.size() - 1);
  if (smallest < -kPsdTolerance) {
    throw ModelError("correlation matrix is not positive semidefinite (eigenvalue " +
                     std::to_string(smallest) + ")");
  }
  if (label == CorrelationLabel::kTransmitTarget && !(smallest > 0.0)) {
    throw ModelError("target correlation matrix must be positive definite");
  }
  return CorrelationMatrix{m, label};
}

CorrelationMatrix exp_correlation(int dim, double rho, CorrelationLabel label) {
  if (dim < 1) throw ModelError("exp_correlation: dim must be >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw ModelError("exp_correlation: rho must lie in [0, 1), got " + std::to_string(rho));
  }
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = std::pow(rho, std::abs(i - j));
  }
  return CorrelationMatrix{HermitianMatrix::from(m), label};
}

void SimConfig::validate() const {
  if (M < 1 || N < 1 || K < 1 || L < 1) throw ModelError("SimConfig: dimensions must be >= 1");
  if (M < K) throw ModelError("SimConfig: requires M >= K");
  if (N < K) throw ModelError("SimConfig: requires N >= K");
  if (L < M || L < N) throw ModelError("SimConfig: requires L >= M and L >= N");
  if (!(rho_target >= 0.0 && rho_target < 1.0) || !(rho_cu >= 0.0 && rho_cu < 1.0)) {
    throw ModelError("SimConfig: correlation coefficients must lie in [0, 1)");
  }
  if (!(p_c >= 0.0) || !(p_s >= 0.0) || !std::isfinite(p_c) || !std::isfinite(p_s)) {
    throw ModelError("SimConfig: p_c and p_s must be finite and nonnegative");
  }
  if (trials < 1 || sigma_trials < 1 || outage_max_trials < 1 || outage_min_events < 1) {
    throw ModelError("SimConfig: trial counts must be >= 1");
  }
}

CorrelationMatrix SimConfig::user_correlation() const {
  return exp_correlation(M, rho_cu, CorrelationLabel::kTransmitCu);
}

CorrelationMatrix SimConfig::target_correlation() const {
  return exp_correlation(M, rho_target, CorrelationLabel::kTransmitTarget);
}

ChannelSampler::ChannelSampler(const CorrelationMatrix& correlation)
    : root_(matrix_sqrt_psd(correlation.inner)),
      identity_(correlation.inner.matrix().isIdentity(0.0)) {}

CMatrix ChannelSampler::sample(int columns, std::uint64_t trial, std::uint64_t seed,
                               Stream stream) const {
  if (columns < 1) throw ModelError("sample_channel: columns must be >= 1");
  TrialRng rng(seed, trial, stream);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const Eigen::Index rows = root_.rows();
  CMatrix w(rows, columns);
  for (Eigen::Index c = 0; c < columns; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      w(r, c) = Complex(re, im);
    }
  }
  if (identity_) return w;
  return root_ * w;
}

CMatrix sample_channel(const CorrelationMatrix& correlation, int columns, std::uint64_t trial,
                       std::uint64_t seed, Stream stream) {
  return ChannelSampler(correlation).sample(columns, trial, seed, stream);
}

ChannelDraw draw_channels(const SimConfig& cfg, std::uint64_t trial) {
  cfg.validate();
  ChannelDraw draw;
  draw.trial_index = trial;
  draw.seed = cfg.seed;
  draw.h_downlink = sample_channel(cfg.user_correlation(), cfg.K, trial, cfg.seed,
                                   Stream::kDownlinkChannel);
  const auto receive = CorrelationMatrix{HermitianMatrix::identity(cfg.N),
                                         CorrelationLabel::kReceiveIdentity};
  draw.h_uplink = sample_channel(receive, cfg.K, trial, cfg.seed, Stream::kUplinkChannel);
  return draw;
}

}  // namespace isac
