#include <cmath>
#include <numbers>

#include <doctest.h>

#include "isac/errors.hpp"
#include "isac/downlink.hpp"
#include "isac/uplink.hpp"

using namespace isac;

namespace {

SimConfig scalar_config() {
  SimConfig cfg;
  cfg.M = cfg.N = cfg.K = cfg.L = 1;
  cfg.seed = 31;
  return cfg;
}

}  // namespace

TEST_SUITE("uplink") {
  TEST_CASE("per-slot rate") {
    CHECK(ul_slot_rate(CMatrix::Ones(1, 1), 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(ul_slot_rate(CMatrix::Identity(2, 2), 0.0, 1.0) == 0.0);
    CHECK(ul_slot_rate(CMatrix::Identity(2, 2), 3.0, 1.0) == doctest::Approx(4.0));
    // Wide and tall channels give the same determinant.
    CMatrix h(2, 1);
    h << Complex(1, 1), Complex(0.5, -2);
    CHECK(ul_slot_rate(h, 2.0, 1.5) == doctest::Approx(std::log2(1.0 + 2.0 * h.squaredNorm() / 1.5)));
    CHECK_THROWS_AS(ul_slot_rate(h, 1.0, 0.5), ModelError);
  }

  TEST_CASE("slot-averaged rate") {
    const CMatrix i2 = CMatrix::Identity(2, 2);
    CHECK(ul_avg_rate(i2, 3.0, SlotNoiseProfile{{1, 1, 1, 1}}) == doctest::Approx(4.0));
    CHECK(ul_avg_rate(i2, 3.0, SlotNoiseProfile{{2, 2, 2, 2}}) == doctest::Approx(2.0 * std::log2(2.5)));
    const SlotNoiseProfile mixed{{1.0, 2.0, 3.5, 2.0}};
    double mean = 0.0;
    for (double r : mixed.rho2) mean += ul_slot_rate(i2, 3.0, r) / 4.0;
    CHECK(std::abs(ul_avg_rate(i2, 3.0, mixed) - mean) < 1e-12);
  }

  TEST_CASE("slot noise from a zero waveform") {
    const CorrelationMatrix rt = exp_correlation(2, 0.7, CorrelationLabel::kTransmitTarget);
    const SlotNoiseProfile p = slot_noise_powers(make_waveform(CMatrix::Zero(2, 4)), rt);
    for (double r : p.rho2) CHECK(r == 1.0);
  }

  TEST_CASE("scalar Rayleigh outage and ergodic rate") {
    SimConfig cfg = scalar_config();
    const SlotNoiseProfile clean{{1.0}};
    const MonteCarloEstimate op = ul_outage_prob(cfg, 1.0, 1.0, clean);
    CHECK(std::abs(op.mean - (1.0 - std::exp(-1.0))) < 3.0 * op.std_error);
    CHECK(ul_outage_prob(cfg, 1.0, 0.0, clean).mean == 1.0);
    CHECK(ul_outage_prob(cfg, 0.0, 1.0, clean).mean == 0.0);

    cfg.trials = 200'000;
    const MonteCarloEstimate ecr = ul_ecr(cfg, 1.0, clean);
    const double exact = -std::exp(1.0) * std::expint(-1.0) / std::numbers::ln2;
    CHECK(std::abs(ecr.mean - exact) < 3.0 * ecr.std_error);
    CHECK(ul_ecr(cfg, 0.0, clean).mean == 0.0);
  }

  TEST_CASE("high-SNR behaviour") {
    CHECK(ul_ecr_asymptote(100.0, 1, 2, SlotNoiseProfile{{1, 1, 1, 1}}) ==
          doctest::Approx(std::log2(100.0) + 0.60995).epsilon(1e-4));
    const double base = ul_ecr_asymptote(1e4, 2, 2, SlotNoiseProfile{{1, 1, 1, 1}});
    CHECK(base - ul_ecr_asymptote(1e4, 2, 2, SlotNoiseProfile{{3, 3, 3, 3}}) ==
          doctest::Approx(2.0 * std::log2(3.0)));

    SimConfig cfg;
    cfg.trials = 50'000;
    const SlotNoiseProfile prof = optimal_uplink_profile(cfg);
    const double p_c = 1e4;
    const MonteCarloEstimate ecr = ul_ecr(cfg, p_c, prof);
    CHECK(std::abs(ecr.mean - ul_ecr_asymptote(p_c, cfg.K, cfg.N, prof)) < 0.1);

    SlotNoiseProfile doubled = prof;
    for (double& r : doubled.rho2) r *= 2.0;
    const double drop = ecr.mean - ul_ecr(cfg, p_c, doubled).mean;
    CHECK(drop == doctest::Approx(cfg.K).epsilon(0.05));
  }

  TEST_CASE("frequency-division uplink") {
    SimConfig cfg;
    cfg.trials = 20'000;
    const SlotNoiseProfile clean{std::vector<double>(cfg.L, 1.0)};
    CHECK(ul_ecr_fdsac(cfg, 1.0, 100.0).mean == doctest::Approx(ul_ecr(cfg, 100.0, clean).mean));
    CHECK(ul_ecr_fdsac(cfg, 0.0, 100.0).mean == 0.0);
    // Slope per doubling: K for full band, K/2 for half band.
    const double full = ul_ecr_fdsac(cfg, 1.0, 2e4).mean - ul_ecr_fdsac(cfg, 1.0, 1e4).mean;
    const double half = ul_ecr_fdsac(cfg, 0.5, 2e4).mean - ul_ecr_fdsac(cfg, 0.5, 1e4).mean;
    CHECK(full - half == doctest::Approx(cfg.K / 2.0).epsilon(0.05));
  }
}
