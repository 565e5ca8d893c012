#include <cmath>

#include <doctest.h>

#include "isac/downlink.hpp"
#include "isac/errors.hpp"
#include "isac/region.hpp"
#include "isac/sensing.hpp"
#include "isac/uplink.hpp"

using namespace isac;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.trials = 4096;
  cfg.sigma_trials = 2048;
  cfg.seed = 3;
  return cfg;
}

RateRegion staircase(std::vector<RatePoint> pts) {
  RateRegion r;
  r.corners = std::move(pts);
  for (std::size_t i = 0; i < r.corners.size(); ++i) {
    r.grid.push_back(static_cast<double>(i));
    r.cr_std_error.push_back(0.0);
  }
  return r;
}

}  // namespace

TEST_SUITE("region") {
  TEST_CASE("containment of explicit staircases") {
    const RateRegion a = staircase({{1.0, 3.0}, {2.0, 2.0}, {3.0, 1.0}});
    CHECK(region_contains(a, a).contained);

    RateRegion bigger = a;
    for (auto& c : bigger.corners) {
      c.cr *= 1.01;
      c.sr *= 1.01;
    }
    const Containment c = region_contains(a, bigger);
    CHECK_FALSE(c.contained);
    CHECK(c.worst_gap > 0.0);
    CHECK(region_contains(bigger, a).contained);

    CHECK(region_contains_point(a, {1.5, 2.0}));
    CHECK(region_contains_point(a, {0.0, 0.0}));
    CHECK_FALSE(region_contains_point(a, {1.5, 2.5}));
    CHECK(region_area(a) == doctest::Approx(6.0));
  }

  TEST_CASE("Monte Carlo slack on the communication axis") {
    RateRegion outer = staircase({{1.0, 1.0}});
    RateRegion inner = staircase({{1.01, 1.0}});
    outer.cr_std_error = {0.004};
    inner.cr_std_error = {0.003};
    CHECK_FALSE(region_contains(outer, inner).contained);
    CHECK(region_contains(outer, inner, ContainmentTolerance{1e-6, 3.0}).contained);
  }

  TEST_CASE("downward closure of computed regions") {
    const SimConfig cfg = small_config();
    const RateRegion r = dl_isac_region(cfg, 3.0, 10.0, 6);
    for (const auto& c : r.corners) {
      for (double f : {0.0, 0.3, 0.999}) CHECK(region_contains_point(r, {c.cr * f, c.sr * f}));
    }
  }

  TEST_CASE("downlink ISAC sweep") {
    const SimConfig cfg = small_config();
    const RateRegion none = dl_isac_region(cfg, 0.0, 10.0, 11);
    REQUIRE(none.corners.size() == 1);
    CHECK(none.corners[0].cr == 0.0);
    CHECK(none.corners[0].sr ==
          doctest::Approx(ul_sr(cfg.target_correlation(), cfg.N, cfg.L, 10.0).rate));

    const RateRegion r = dl_isac_region(cfg, 3.0, 10.0, 7);
    CHECK(r.sweep_param == SweepParam::kCommPower);
    for (std::size_t i = 1; i < r.corners.size(); ++i) {
      CHECK(r.corners[i].cr >= r.corners[i - 1].cr);
      CHECK(r.corners[i].sr <= r.corners[i - 1].sr + 1e-12);
    }
    CHECK_THROWS_AS(dl_isac_region(cfg, 3.0, 10.0, 1), ModelError);
  }

  TEST_CASE("uplink ISAC sweep") {
    const SimConfig cfg = small_config();
    const RateRegion r = ul_isac_region(cfg, 3.0, 10.0, 6);
    CHECK(r.sweep_param == SweepParam::kSensePower);
    const SlotNoiseProfile clean{std::vector<double>(cfg.L, 1.0)};
    // The p_s = 0 corner has the largest cr and no sensing.
    CHECK(r.corners.back().sr == 0.0);
    CHECK(r.corners.back().cr == doctest::Approx(ul_ecr(cfg, 3.0, clean).mean));
    for (std::size_t i = 1; i < r.corners.size(); ++i) CHECK(r.corners[i].sr <= r.corners[i - 1].sr);
  }

  TEST_CASE("frequency-division sweeps") {
    const SimConfig cfg = small_config();
    const RateRegion d = dl_fdsac_region(cfg, 3.0, 10.0, 5);
    CHECK(d.sweep_param == SweepParam::kAlpha);
    CHECK(d.corners.front().cr == 0.0);
    CHECK(d.corners.front().sr == doctest::Approx(ul_sr(cfg.target_correlation(), 2, 4, 10.0).rate));
    CHECK(d.corners.back().sr == 0.0);
    CHECK(d.corners.back().cr == doctest::Approx(dl_ecr(cfg, 3.0).mean));
    for (std::size_t i = 1; i < d.corners.size(); ++i) {
      CHECK(d.corners[i].cr > d.corners[i - 1].cr);
      CHECK(d.corners[i].sr < d.corners[i - 1].sr);
    }
    CHECK(d.corners[2].cr == doctest::Approx(dl_ecr_fdsac(cfg, 0.5, 3.0).mean));
    CHECK(d.corners[2].sr == doctest::Approx(fdsac_sr(cfg.target_correlation(), 2, 4, 10.0, 0.5)));

    const RateRegion u = ul_fdsac_region(cfg, 3.0, 10.0, 5);
    CHECK(u.corners[2].cr == doctest::Approx(ul_ecr_fdsac(cfg, 0.5, 3.0).mean));
  }

  TEST_CASE("area is stable under grid refinement") {
    const SimConfig cfg = small_config();
    const double coarse = region_area(dl_isac_region(cfg, 3.0, 10.0, 41));
    const double fine = region_area(dl_isac_region(cfg, 3.0, 10.0, 81));
    CHECK(std::abs(fine - coarse) / fine < 0.01);
  }
}
