#pragma once

#include <vector>

#include "isac/channel.hpp"
#include "isac/montecarlo.hpp"
#include "isac/sensing.hpp"

namespace isac {

// Per-slot interference-plus-noise power rho_l^2 = 1 + s_l^H R_T s_l seen by
// the uplink users while the radar echo is still present.
struct SlotNoiseProfile {
  std::vector<double> rho2;
};

SlotNoiseProfile slot_noise_powers(const Waveform& waveform, const CorrelationMatrix& r_target);

// Profile produced by the SR-optimal uplink waveform at cfg.p_s.
SlotNoiseProfile optimal_uplink_profile(const SimConfig& cfg);

// MMSE-SIC sum rate of one slot: log2 det(I_N + (p_c / rho2) H_u H_u^H).
double ul_slot_rate(const CMatrix& h_u, double p_c, double rho2);

// Mean of ul_slot_rate over the slots of the profile.
double ul_avg_rate(const CMatrix& h_u, double p_c, const SlotNoiseProfile& profile);

MonteCarloEstimate ul_outage_prob(const SimConfig& cfg, double rate_target, double p_c,
                                  const SlotNoiseProfile& profile);
// Outage of the interference-free alpha * log2 det(I_N + (p_c / alpha) H_u H_u^H).
MonteCarloEstimate ul_outage_prob_fdsac(const SimConfig& cfg, double rate_target, double alpha,
                                        double p_c);
MonteCarloEstimate ul_ecr(const SimConfig& cfg, double p_c, const SlotNoiseProfile& profile);

// K log2 p_c + E(N, K) - (K/L) sum_l log2 rho_l^2, with E from
// ed_closed_form_iid evaluated at the receive dimension N.
double ul_ecr_asymptote(double p_c, int K, int N, const SlotNoiseProfile& profile);

// Frequency-division baseline: alpha * E{log2 det(I_N + (p_c / alpha) H_u H_u^H)}.
MonteCarloEstimate ul_ecr_fdsac(const SimConfig& cfg, double alpha, double p_c);

}  // namespace isac
