#pragma once

// Brute-force and sampling oracles used by the acceptance criteria. None of
// them calls into the solver it is used to check.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace isac::oracle {

// Water-filling objective sum_m log2(1 + gains[m] x[m] / noise[m]).
double waterfill_bits(std::span<const double> gains, std::span<const double> noise,
                      std::span<const double> x);

// Best objective on the budget face {x >= 0, sum x = budget} found by a
// multi-resolution grid search that refines until the grid step is at most
// `resolution` (absolute allocation units).
double grid_search_waterfill(std::span<const double> gains, std::span<const double> noise,
                             double budget, double resolution);

// log2 det(I + sum_k p_k h_k h_k^H) through a plain determinant.
double dual_mac_bits(const Eigen::MatrixXcd& h, std::span<const double> powers);

// Best of `samples` allocations drawn uniformly from {p >= 0, sum p <= p_c}.
double best_random_dual_mac(const Eigen::MatrixXcd& h, double p_c, int samples,
                            std::uint64_t seed);

// Monte Carlo E{log2 det(H^H H)} for H an M x K matrix of i.i.d. CN(0, 1).
struct WishartEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
WishartEstimate wishart_logdet(int M, int K, int trials, std::uint64_t seed);

// Largest (N / L) log2 det(I_L + S^H R S / sigma2) over `samples` random
// waveforms with tr(S S^H) <= p_s.
double best_random_waveform_rate(const Eigen::MatrixXcd& r_target, int N, int L, double sigma2,
                                 double p_s, int samples, std::uint64_t seed);

}  // namespace isac::oracle
