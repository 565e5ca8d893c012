#pragma once

#include <string>
#include <vector>

#include "isac/channel.hpp"

namespace isac {

struct RatePoint {
  double cr = 0.0;  // ergodic communication rate, bits/s/Hz
  double sr = 0.0;  // sensing rate, bits per slot
};

enum class SweepParam { kCommPower, kSensePower, kAlpha };

std::string to_string(SweepParam p);

// Union of rectangles [0, cr_i] x [0, sr_i], one corner per sweep sample.
// Corners are stored with cr nondecreasing; grid[i] and cr_std_error[i]
// belong to corners[i].
struct RateRegion {
  std::vector<RatePoint> corners;
  SweepParam sweep_param = SweepParam::kCommPower;
  std::vector<double> grid;
  std::vector<double> cr_std_error;
};

// Sweeps p_c over grid_size uniform points in [0, p_c_max] at p_s = p_s_max.
RateRegion dl_isac_region(const SimConfig& cfg, double p_c_max, double p_s_max, int grid_size);
// Sweeps p_s over [0, p_s_max] at p_c = p_c_max.
RateRegion ul_isac_region(const SimConfig& cfg, double p_c_max, double p_s_max, int grid_size);
// Sweep the bandwidth share alpha over [0, 1] at fixed powers.
RateRegion dl_fdsac_region(const SimConfig& cfg, double p_c, double p_s, int grid_size);
RateRegion ul_fdsac_region(const SimConfig& cfg, double p_c, double p_s, int grid_size);

struct ContainmentTolerance {
  double absolute = 1e-6;
  // Extra slack on cr, in combined Monte Carlo standard errors of the pair.
  double cr_sigmas = 0.0;
};

struct Containment {
  bool contained = false;
  double worst_gap = 0.0;   // max over inner corners of the distance to domination
  std::size_t worst_corner = 0;
  std::vector<double> gaps;  // per inner corner
};

Containment region_contains(const RateRegion& outer, const RateRegion& inner,
                            const ContainmentTolerance& tol = {});

bool region_contains_point(const RateRegion& region, const RatePoint& p, double tol = 1e-12);

double region_area(const RateRegion& region);

}  // namespace isac
