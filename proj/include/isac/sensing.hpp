#pragma once

#include "isac/channel.hpp"
#include "isac/downlink.hpp"
#include "isac/numerics.hpp"

namespace isac {

struct SensingScenario {
  CorrelationMatrix r_target;  // M x M, positive definite
  int N = 2;
  int L = 4;
  double sigma2 = 1.0;  // effective noise: 1 + tr(R_T Sigma) downlink, 1 uplink
  double p_s = 0.0;

  void validate() const;
};

struct Waveform {
  CMatrix s_matrix;  // M x L, column l is the slot-l transmit vector
  HermitianMatrix gram;
};

Waveform make_waveform(const CMatrix& s);

// 1 + tr(R_T Sigma): noise floor once communication echoes are treated as noise.
double sigma2_effective(const CorrelationMatrix& r_target, const MeanInputCovariance& sigma);

// Sensing mutual information over L slots, N log2 det(I_L + S^H R_T S / sigma2).
double sensing_mi(const SensingScenario& scenario, const Waveform& waveform);

struct SensingRate {
  double rate = 0.0;  // bits per slot
  WaterfillSolution allocation;  // indexed like the descending eigenvalues of R_T
};

// Maximum of sensing_mi / L over tr(S S^H) <= p_s.
SensingRate dl_sr(const SensingScenario& scenario);

// Interference-free variant (sigma2 = 1). Takes no communication parameter:
// uplink sensing runs after the user signals have been cancelled.
SensingRate ul_sr(const CorrelationMatrix& r_target, int N, int L, double p_s);

// S = U diag(alloc)^{1/2} F with U the eigenvectors of R_T and F the first M
// rows of the unitary L-point DFT, so S S^H = U diag(alloc) U^H and every
// slot carries power tr(S S^H) / L.
Waveform build_waveform(const CorrelationMatrix& r_target, const WaterfillSolution& alloc, int L);

struct HighSnrRate {
  double rate = 0.0;
  bool valid = false;  // false when some eigen-mode is inactive at p_s
};

// (NM/L) (log2 p_s + (1/M) sum_m log2(lambda_m / (M sigma2))).
HighSnrRate sr_highsnr(const CorrelationMatrix& r_target, int N, int L, double p_s, double sigma2);

// Frequency-division baseline: sensing keeps a (1 - alpha) bandwidth share.
double fdsac_sr(const CorrelationMatrix& r_target, int N, int L, double p_s, double alpha);

}  // namespace isac
