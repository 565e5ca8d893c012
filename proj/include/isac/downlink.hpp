#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "isac/channel.hpp"
#include "isac/montecarlo.hpp"
#include "isac/numerics.hpp"

namespace isac {

struct PowerAllocation {
  std::vector<double> powers;
  double sum_budget = 0.0;
};

// Sum-power dual multiple-access problem for single-antenna users:
//   max log2 det(I_M + sum_k p_k h_k h_k^H)  s.t.  sum_k p_k <= p_c, p_k >= 0.
// Solved by projected gradient ascent with backtracking; stops once the
// Frank-Wolfe duality gap certifies optimality to kDualMacGapBits.
inline constexpr double kDualMacGapBits = 1e-10;
inline constexpr int kDualMacMaxIterations = 500;

struct DualMacSolution {
  PowerAllocation allocation;
  double objective = 0.0;  // bits
  double gap = 0.0;        // upper bound on optimum - objective
  int iterations = 0;
};

DualMacSolution solve_dual_mac(const CMatrix& h_d, double p_c);
PowerAllocation dual_mac_power_alloc(const CMatrix& h_d, double p_c);
double dual_mac_objective(const CMatrix& h_d, std::span<const double> powers);

// Dirty-paper-coding sum capacity of the broadcast channel.
double dl_sum_rate(const CMatrix& h_d, double p_c);

// Rank-one per-user broadcast covariances obtained from a dual-MAC allocation,
// user k precoded against users 1..k-1. They sum to the transmit covariance.
std::vector<HermitianMatrix> mac_to_bc_user_covariances(const CMatrix& h_d,
                                                        const PowerAllocation& alloc);
HermitianMatrix mac_to_bc_covariance(const CMatrix& h_d, const PowerAllocation& alloc);

// Sum of per-user DPC rates log2(1 + h_k^H S_k h_k / (1 + h_k^H (sum_{j<k} S_j) h_k)).
double bc_dpc_sum_rate(const CMatrix& h_d, std::span<const HermitianMatrix> user_covariances);

struct MeanInputCovariance {
  HermitianMatrix sigma_matrix;
  std::int64_t trials_used = 0;
  double p_c = 0.0;
};

// Average of the per-realization transmit covariance at cfg.p_c over
// cfg.sigma_trials channel draws.
MeanInputCovariance estimate_mean_covariance(const SimConfig& cfg);

// Memoized estimate_mean_covariance, keyed by every field that affects it.
MeanInputCovariance cached_mean_covariance(const SimConfig& cfg);
void clear_mean_covariance_cache();

// Probability that the sum rate falls below rate_target. Trials run until
// cfg.outage_min_events outages were seen or cfg.outage_max_trials is reached.
MonteCarloEstimate dl_outage_prob(const SimConfig& cfg, double rate_target, double p_c);
// Frequency-division counterpart: outage of alpha * dl_sum_rate(H, p_c / alpha).
MonteCarloEstimate dl_outage_prob_fdsac(const SimConfig& cfg, double rate_target, double alpha,
                                        double p_c);
MonteCarloEstimate dl_ecr(const SimConfig& cfg, double p_c);
MonteCarloEstimate dl_ecr_fdsac(const SimConfig& cfg, double alpha, double p_c);

// (1/ln 2) * sum_{t=0}^{K-1} (H_{M-t-1} - C): E{log2 det(H^H H)} for an
// M x K matrix with i.i.d. CN(0, 1) entries.
double ed_closed_form_iid(int M, int K);

// High-SNR ergodic sum rate K log2(p_c / K) + E_d.
double dl_ecr_asymptote(double p_c, int K, double e_d);

}  // namespace isac
