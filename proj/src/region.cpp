#include "isac/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "isac/downlink.hpp"
#include "isac/sensing.hpp"
#include "isac/uplink.hpp"

namespace isac {

namespace {

std::vector<double> uniform_grid(double hi, int grid_size) {
  if (grid_size < 2) throw ModelError("region: grid_size must be >= 2");
  if (!(hi >= 0.0) || !std::isfinite(hi)) throw ModelError("region: sweep bound must be >= 0");
  if (hi == 0.0) return {0.0};
  std::vector<double> g(grid_size);
  for (int i = 0; i < grid_size; ++i) g[i] = hi * i / (grid_size - 1);
  g.back() = hi;
  return g;
}

// Stable sort by cr so that ties keep sweep order.
RateRegion assemble(SweepParam param, const std::vector<double>& grid,
                    const std::vector<RatePoint>& pts, const std::vector<double>& se) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pts[a].cr < pts[b].cr; });
  RateRegion r;
  r.sweep_param = param;
  for (std::size_t i : order) {
    r.corners.push_back(pts[i]);
    r.grid.push_back(grid[i]);
    r.cr_std_error.push_back(se[i]);
  }
  return r;
}

}  // namespace

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::kCommPower: return "p_c";
    case SweepParam::kSensePower: return "p_s";
    case SweepParam::kAlpha: return "alpha";
  }
  return "unknown";
}

RateRegion dl_isac_region(const SimConfig& cfg, double p_c_max, double p_s_max, int grid_size) {
  cfg.validate();
  const std::vector<double> grid = uniform_grid(p_c_max, grid_size);
  const CorrelationMatrix r_target = cfg.target_correlation();
  std::vector<RatePoint> pts;
  std::vector<double> se;
  for (double p_c : grid) {
    SimConfig at = cfg;
    at.p_c = p_c;
    at.p_s = p_s_max;
    const MonteCarloEstimate ecr = dl_ecr(at, p_c);
    const double sigma2 = sigma2_effective(r_target, cached_mean_covariance(at));
    const SensingRate sr = dl_sr(SensingScenario{r_target, cfg.N, cfg.L, sigma2, p_s_max});
    pts.push_back({ecr.mean, sr.rate});
    se.push_back(ecr.std_error);
  }
  return assemble(SweepParam::kCommPower, grid, pts, se);
}

RateRegion ul_isac_region(const SimConfig& cfg, double p_c_max, double p_s_max, int grid_size) {
  cfg.validate();
  const std::vector<double> grid = uniform_grid(p_s_max, grid_size);
  const CorrelationMatrix r_target = cfg.target_correlation();
  std::vector<RatePoint> pts;
  std::vector<double> se;
  for (double p_s : grid) {
    SimConfig at = cfg;
    at.p_c = p_c_max;
    at.p_s = p_s;
    const SensingRate sr = ul_sr(r_target, cfg.N, cfg.L, p_s);
    const SlotNoiseProfile profile =
        slot_noise_powers(build_waveform(r_target, sr.allocation, cfg.L), r_target);
    const MonteCarloEstimate ecr = ul_ecr(at, p_c_max, profile);
    pts.push_back({ecr.mean, sr.rate});
    se.push_back(ecr.std_error);
  }
  return assemble(SweepParam::kSensePower, grid, pts, se);
}

RateRegion dl_fdsac_region(const SimConfig& cfg, double p_c, double p_s, int grid_size) {
  cfg.validate();
  const std::vector<double> grid = uniform_grid(1.0, grid_size);
  const CorrelationMatrix r_target = cfg.target_correlation();
  std::vector<RatePoint> pts;
  std::vector<double> se;
  for (double alpha : grid) {
    const MonteCarloEstimate ecr = dl_ecr_fdsac(cfg, alpha, p_c);
    pts.push_back({ecr.mean, fdsac_sr(r_target, cfg.N, cfg.L, p_s, alpha)});
    se.push_back(ecr.std_error);
  }
  return assemble(SweepParam::kAlpha, grid, pts, se);
}

RateRegion ul_fdsac_region(const SimConfig& cfg, double p_c, double p_s, int grid_size) {
  cfg.validate();
  const std::vector<double> grid = uniform_grid(1.0, grid_size);
  const CorrelationMatrix r_target = cfg.target_correlation();
  std::vector<RatePoint> pts;
  std::vector<double> se;
  for (double alpha : grid) {
    const MonteCarloEstimate ecr = ul_ecr_fdsac(cfg, alpha, p_c);
    pts.push_back({ecr.mean, fdsac_sr(r_target, cfg.N, cfg.L, p_s, alpha)});
    se.push_back(ecr.std_error);
  }
  return assemble(SweepParam::kAlpha, grid, pts, se);
}

Containment region_contains(const RateRegion& outer, const RateRegion& inner,
                            const ContainmentTolerance& tol) {
  if (outer.corners.empty()) throw ModelError("region_contains: outer region is empty");
  auto se_at = [](const RateRegion& r, std::size_t i) {
    return i < r.cr_std_error.size() ? r.cr_std_error[i] : 0.0;
  };
  Containment out;
  out.gaps.reserve(inner.corners.size());
  for (std::size_t i = 0; i < inner.corners.size(); ++i) {
    const RatePoint& p = inner.corners[i];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < outer.corners.size(); ++j) {
      const RatePoint& q = outer.corners[j];
      const double slack =
          tol.cr_sigmas * std::hypot(se_at(inner, i), se_at(outer, j));
      const double gap = std::max({0.0, p.cr - q.cr - slack, p.sr - q.sr});
      best = std::min(best, gap);
    }
    out.gaps.push_back(best);
    if (best > out.worst_gap) {
      out.worst_gap = best;
      out.worst_corner = i;
    }
  }
  out.contained = out.worst_gap <= tol.absolute;
  return out;
}

bool region_contains_point(const RateRegion& region, const RatePoint& p, double tol) {
  if (p.cr < 0.0 || p.sr < 0.0) return false;
  return std::any_of(region.corners.begin(), region.corners.end(), [&](const RatePoint& q) {
    return p.cr <= q.cr + tol && p.sr <= q.sr + tol;
  });
}

double region_area(const RateRegion& region) {
  std::vector<RatePoint> c = region.corners;
  std::sort(c.begin(), c.end(), [](const RatePoint& a, const RatePoint& b) { return a.cr > b.cr; });
  double area = 0.0;
  double tallest = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    tallest = std::max(tallest, c[i].sr);
    const double next_cr = i + 1 < c.size() ? c[i + 1].cr : 0.0;
    area += (c[i].cr - std::max(next_cr, 0.0)) * tallest;
  }
  return area;
}

}  // namespace isac
