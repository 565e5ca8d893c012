#pragma once

#include <cstddef>
#include <span>
#include <utility>

namespace isac {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> window{0.0, 0.0};  // abscissa range actually used
  std::size_t points = 0;
};

// Ordinary least squares y = slope * x + intercept. Needs >= 2 distinct x.
SlopeFit least_squares(std::span<const double> x, std::span<const double> y);

// Rate slope in bits per doubling of SNR: regresses rate on log2(10^(snr_db/10))
// using the points with snr_db in [window_lo_db, window_hi_db]. Needs >= 3.
SlopeFit fit_highsnr_slope(std::span<const double> snr_db, std::span<const double> rate,
                           double window_lo_db, double window_hi_db);

struct DiversityFit {
  SlopeFit fit;              // log10(op) against log10(p)
  double diversity = 0.0;    // -fit.slope
  bool dropped_zero_bins = false;
};

// Diversity order from an outage curve. Points with op outside
// [op_lo, op_hi] are ignored and zero-probability bins are dropped with a
// flag. Needs >= 3 usable points.
DiversityFit fit_diversity(std::span<const double> p_db, std::span<const double> op,
                           double op_lo = 1e-4, double op_hi = 1e-1);

}  // namespace isac
