#include "isac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "isac/errors.hpp"

namespace isac {

SlopeFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ModelError("least_squares: length mismatch");
  if (x.size() < 2) throw ModelError("least_squares: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ModelError("least_squares: abscissa values are all equal");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  fit.window = {*lo, *hi};
  fit.points = x.size();
  return fit;
}

SlopeFit fit_highsnr_slope(std::span<const double> snr_db, std::span<const double> rate,
                           double window_lo_db, double window_hi_db) {
  if (snr_db.size() != rate.size()) throw ModelError("fit_highsnr_slope: length mismatch");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    if (snr_db[i] >= window_lo_db && snr_db[i] <= window_hi_db) {
      x.push_back(snr_db[i] / 10.0 * std::numbers::ln10 / std::numbers::ln2);
      y.push_back(rate[i]);
    }
  }
  if (x.size() < 3) throw ModelError("fit_highsnr_slope: fewer than 3 points in window");
  SlopeFit fit = least_squares(x, y);
  fit.window = {window_lo_db, window_hi_db};
  return fit;
}

DiversityFit fit_diversity(std::span<const double> p_db, std::span<const double> op,
                           double op_lo, double op_hi) {
  if (p_db.size() != op.size()) throw ModelError("fit_diversity: length mismatch");
  DiversityFit out;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> used_db;
  for (std::size_t i = 0; i < op.size(); ++i) {
    if (op[i] <= 0.0) {
      out.dropped_zero_bins = true;
      continue;
    }
    if (op[i] < op_lo || op[i] > op_hi || op[i] >= 1.0) continue;
    x.push_back(p_db[i] / 10.0);
    y.push_back(std::log10(op[i]));
    used_db.push_back(p_db[i]);
  }
  if (x.size() < 3) throw ModelError("fit_diversity: fewer than 3 points in the outage window");
  out.fit = least_squares(x, y);
  const auto [lo, hi] = std::minmax_element(used_db.begin(), used_db.end());
  out.fit.window = {*lo, *hi};
  out.diversity = -out.fit.slope;
  return out;
}

}  // namespace isac
