#include "isac/uplink.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "isac/downlink.hpp"

namespace isac {

namespace {

void check_profile(const SlotNoiseProfile& profile, const char* where) {
  if (profile.rho2.empty()) throw ModelError(std::string(where) + ": empty slot profile");
  for (double v : profile.rho2) {
    if (!(v >= 1.0) || !std::isfinite(v)) {
      throw ModelError(std::string(where) + ": slot noise powers must be >= 1");
    }
  }
}

ChannelSampler uplink_sampler(const SimConfig& cfg) {
  return ChannelSampler(
      CorrelationMatrix{HermitianMatrix::identity(cfg.N), CorrelationLabel::kReceiveIdentity});
}

}  // namespace

SlotNoiseProfile slot_noise_powers(const Waveform& waveform, const CorrelationMatrix& r_target) {
  const CMatrix& s = waveform.s_matrix;
  if (s.rows() != r_target.dim()) {
    throw ModelError("slot_noise_powers: waveform rows must equal M");
  }
  SlotNoiseProfile out;
  out.rho2.resize(s.cols());
  for (Eigen::Index l = 0; l < s.cols(); ++l) {
    const double quad = s.col(l).dot(r_target.inner.matrix() * s.col(l)).real();
    out.rho2[l] = 1.0 + std::max(quad, 0.0);
  }
  return out;
}

SlotNoiseProfile optimal_uplink_profile(const SimConfig& cfg) {
  cfg.validate();
  const CorrelationMatrix r_target = cfg.target_correlation();
  const SensingRate sr = ul_sr(r_target, cfg.N, cfg.L, cfg.p_s);
  return slot_noise_powers(build_waveform(r_target, sr.allocation, cfg.L), r_target);
}

double ul_slot_rate(const CMatrix& h_u, double p_c, double rho2) {
  if (!(p_c >= 0.0)) throw ModelError("ul_slot_rate: p_c must be nonnegative");
  if (!(rho2 >= 1.0)) throw ModelError("ul_slot_rate: rho2 must be >= 1");
  if (p_c == 0.0) return 0.0;
  // det(I_N + c H H^H) = det(I_K + c H^H H); use the smaller side.
  const double c = p_c / rho2;
  if (h_u.cols() <= h_u.rows()) {
    return log2det_hpd(CMatrix::Identity(h_u.cols(), h_u.cols()) + c * h_u.adjoint() * h_u);
  }
  return log2det_hpd(CMatrix::Identity(h_u.rows(), h_u.rows()) + c * h_u * h_u.adjoint());
}

double ul_avg_rate(const CMatrix& h_u, double p_c, const SlotNoiseProfile& profile) {
  check_profile(profile, "ul_avg_rate");
  double total = 0.0;
  double last_rho2 = 0.0;
  double last_rate = 0.0;
  for (double r : profile.rho2) {
    if (r != last_rho2) {
      last_rate = ul_slot_rate(h_u, p_c, r);
      last_rho2 = r;
    }
    total += last_rate;
  }
  return total / static_cast<double>(profile.rho2.size());
}

MonteCarloEstimate ul_outage_prob(const SimConfig& cfg, double rate_target, double p_c,
                                  const SlotNoiseProfile& profile) {
  cfg.validate();
  check_profile(profile, "ul_outage_prob");
  if (!(p_c >= 0.0)) throw ModelError("ul_outage_prob: p_c must be nonnegative");
  if (!(rate_target >= 0.0)) throw ModelError("ul_outage_prob: target rate must be >= 0");
  const ChannelSampler sampler = uplink_sampler(cfg);
  AdaptivePolicy policy;
  policy.min_events = cfg.outage_min_events;
  policy.max_trials = cfg.outage_max_trials;
  policy.min_trials = std::min(policy.min_trials, cfg.outage_max_trials);
  return mc_probability(policy, cfg.seed, cfg.threads, [&](std::int64_t t) {
    if (rate_target == 0.0) return false;
    if (p_c == 0.0) return true;
    const CMatrix h =
        sampler.sample(cfg.K, static_cast<std::uint64_t>(t), cfg.seed, Stream::kUplinkChannel);
    return ul_avg_rate(h, p_c, profile) < rate_target;
  });
}

MonteCarloEstimate ul_outage_prob_fdsac(const SimConfig& cfg, double rate_target, double alpha,
                                        double p_c) {
  cfg.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ModelError("ul_outage_prob: alpha must lie in [0, 1]");
  if (!(p_c >= 0.0)) throw ModelError("ul_outage_prob: p_c must be nonnegative");
  if (!(rate_target >= 0.0)) throw ModelError("ul_outage_prob: target rate must be >= 0");
  const ChannelSampler sampler = uplink_sampler(cfg);
  AdaptivePolicy policy;
  policy.min_events = cfg.outage_min_events;
  policy.max_trials = cfg.outage_max_trials;
  policy.min_trials = std::min(policy.min_trials, cfg.outage_max_trials);
  return mc_probability(policy, cfg.seed, cfg.threads, [&](std::int64_t t) {
    if (rate_target == 0.0) return false;
    if (p_c == 0.0 || alpha == 0.0) return true;
    const CMatrix h =
        sampler.sample(cfg.K, static_cast<std::uint64_t>(t), cfg.seed, Stream::kUplinkChannel);
    return alpha * ul_slot_rate(h, p_c / alpha, 1.0) < rate_target;
  });
}

MonteCarloEstimate ul_ecr(const SimConfig& cfg, double p_c, const SlotNoiseProfile& profile) {
  cfg.validate();
  check_profile(profile, "ul_ecr");
  if (!(p_c >= 0.0)) throw ModelError("ul_ecr: p_c must be nonnegative");
  const ChannelSampler sampler = uplink_sampler(cfg);
  return mc_mean(cfg.trials, cfg.seed, cfg.threads, [&](std::int64_t t) {
    if (p_c == 0.0) return 0.0;
    const CMatrix h =
        sampler.sample(cfg.K, static_cast<std::uint64_t>(t), cfg.seed, Stream::kUplinkChannel);
    return ul_avg_rate(h, p_c, profile);
  });
}

double ul_ecr_asymptote(double p_c, int K, int N, const SlotNoiseProfile& profile) {
  check_profile(profile, "ul_ecr_asymptote");
  if (!(p_c > 0.0)) throw ModelError("ul_ecr_asymptote: p_c must be positive");
  double log_noise = 0.0;
  for (double r : profile.rho2) log_noise += std::log2(r);
  return K * std::log2(p_c) + ed_closed_form_iid(N, K) -
         K * log_noise / static_cast<double>(profile.rho2.size());
}

MonteCarloEstimate ul_ecr_fdsac(const SimConfig& cfg, double alpha, double p_c) {
  cfg.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ModelError("ul_ecr_fdsac: alpha must lie in [0, 1]");
  if (!(p_c >= 0.0)) throw ModelError("ul_ecr_fdsac: p_c must be nonnegative");
  const ChannelSampler sampler = uplink_sampler(cfg);
  return mc_mean(cfg.trials, cfg.seed, cfg.threads, [&](std::int64_t t) {
    if (alpha == 0.0 || p_c == 0.0) return 0.0;
    const CMatrix h =
        sampler.sample(cfg.K, static_cast<std::uint64_t>(t), cfg.seed, Stream::kUplinkChannel);
    return alpha * ul_slot_rate(h, p_c / alpha, 1.0);
  });
}

}  // namespace isac
