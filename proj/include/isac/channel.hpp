#pragma once

#include <cstdint>

#include "isac/numerics.hpp"
#include "isac/rng.hpp"

namespace isac {

enum class CorrelationLabel { kTransmitCu, kTransmitTarget, kReceiveIdentity };

struct CorrelationMatrix {
  HermitianMatrix inner;
  CorrelationLabel label = CorrelationLabel::kTransmitCu;

  Eigen::Index dim() const noexcept { return inner.dim(); }
};

// Wraps `m` after checking it is PSD (strictly PD for kTransmitTarget).
CorrelationMatrix make_correlation(const HermitianMatrix& m, CorrelationLabel label);

// Exponential model: entry (i, j) = rho^|i - j|, 0 <= rho < 1.
CorrelationMatrix exp_correlation(int dim, double rho,
                                  CorrelationLabel label = CorrelationLabel::kTransmitCu);

// System dimensions, power levels (linear scale) and Monte Carlo budgets.
struct SimConfig {
  int M = 2;  // transmit antennas
  int N = 2;  // receive antennas
  int K = 2;  // single-antenna users
  int L = 4;  // waveform length in slots
  double rho_target = 0.7;
  double rho_cu = 0.8;
  double p_c = 1.0;
  double p_s = 1.0;
  std::int64_t trials = 100'000;        // ergodic-rate trials
  std::int64_t sigma_trials = 10'000;   // mean-covariance trials
  std::int64_t outage_min_events = 200;
  std::int64_t outage_max_trials = 10'000'000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency; never changes results

  // Throws ModelError unless M >= K, N >= K, L >= M, L >= N and the
  // remaining fields are in range.
  void validate() const;

  CorrelationMatrix user_correlation() const;
  CorrelationMatrix target_correlation() const;
};

// Draws CN(0, R) columns as R^{1/2} w with w i.i.d. CN(0, 1). The square root
// is computed once per sampler.
class ChannelSampler {
 public:
  explicit ChannelSampler(const CorrelationMatrix& correlation);

  CMatrix sample(int columns, std::uint64_t trial, std::uint64_t seed,
                 Stream stream = Stream::kDownlinkChannel) const;

  Eigen::Index dim() const noexcept { return root_.rows(); }

 private:
  CMatrix root_;
  bool identity_ = false;
};

CMatrix sample_channel(const CorrelationMatrix& correlation, int columns, std::uint64_t trial,
                       std::uint64_t seed, Stream stream = Stream::kDownlinkChannel);

struct ChannelDraw {
  CMatrix h_downlink;  // M x K, column k ~ CN(0, R)
  CMatrix h_uplink;    // N x K, i.i.d. CN(0, 1)
  std::uint64_t trial_index = 0;
  std::uint64_t seed = 0;
};

// Both link matrices of one trial, from independent streams.
ChannelDraw draw_channels(const SimConfig& cfg, std::uint64_t trial);

}  // namespace isac
