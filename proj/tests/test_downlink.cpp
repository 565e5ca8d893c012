#include <cmath>
#include <numbers>

#include <doctest.h>

#include "isac/downlink.hpp"
#include "isac/errors.hpp"
#include "oracles.hpp"

using namespace isac;

namespace {

CMatrix columns(std::initializer_list<std::initializer_list<double>> cols) {
  CMatrix h(cols.begin()->size(), cols.size());
  int k = 0;
  for (const auto& c : cols) {
    int m = 0;
    for (double v : c) h(m++, k) = v;
    ++k;
  }
  return h;
}

SimConfig scalar_config() {
  SimConfig cfg;
  cfg.M = cfg.N = cfg.K = cfg.L = 1;
  cfg.rho_cu = 0.0;
  cfg.seed = 77;
  return cfg;
}

// Exhaustive 1-D search over p_1 in [0, p_c] for two users.
double two_user_grid(const CMatrix& h, double p_c, int steps) {
  double best = -1e300;
  for (int i = 0; i <= steps; ++i) {
    const double p1 = p_c * i / steps;
    const double p[] = {p1, p_c - p1};
    best = std::max(best, oracle::dual_mac_bits(h, p));
  }
  return best;
}

}  // namespace

TEST_SUITE("downlink") {
  TEST_CASE("dual-MAC worked examples") {
    const CMatrix i2 = CMatrix::Identity(2, 2);
    const PowerAllocation a = dual_mac_power_alloc(i2, 2.0);
    CHECK(a.powers[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(a.powers[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(dl_sum_rate(i2, 2.0) == doctest::Approx(2.0).epsilon(1e-9));

    const CMatrix h = columns({{1, 0}, {0, 2}});
    const PowerAllocation b = dual_mac_power_alloc(h, 1.0);
    CHECK(b.powers[0] == doctest::Approx(0.125).epsilon(1e-5));
    CHECK(b.powers[1] == doctest::Approx(0.875).epsilon(1e-5));
    CHECK(std::abs(dl_sum_rate(h, 1.0) - std::log2(5.0625)) < 1e-9);
    CHECK(std::abs(dl_sum_rate(h, 1.0) - two_user_grid(h, 1.0, 10'000)) < 1e-4);

    const CMatrix aligned = columns({{1, 0}, {2, 0}});
    const PowerAllocation c = dual_mac_power_alloc(aligned, 1.0);
    CHECK(c.powers[0] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(c.powers[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(dl_sum_rate(aligned, 1.0) == doctest::Approx(std::log2(5.0)).epsilon(1e-9));

    CHECK(dl_sum_rate(h, 0.0) == 0.0);
    CHECK_THROWS_AS(dl_sum_rate(h, -1.0), ModelError);
  }

  TEST_CASE("dual-MAC solution beats random allocations and certifies its gap") {
    const CorrelationMatrix r = exp_correlation(2, 0.8);
    for (int t = 0; t < 20; ++t) {
      const CMatrix h = sample_channel(r, 2, t, 123);
      const double p_c = std::pow(10.0, (t % 4));
      const DualMacSolution s = solve_dual_mac(h, p_c);
      CHECK(s.gap >= 0.0);
      double sum = 0.0;
      for (double p : s.allocation.powers) sum += p;
      CHECK(sum == doctest::Approx(p_c).epsilon(1e-9));
      CHECK(s.objective >= oracle::best_random_dual_mac(h, p_c, 2000, 900 + t) - 1e-9);
      CHECK(std::abs(s.objective - two_user_grid(h, p_c, 20'000)) < 1e-6);
    }
  }

  TEST_CASE("MAC to BC duality preserves power and sum rate") {
    const CMatrix i2 = CMatrix::Identity(2, 2);
    const HermitianMatrix sig = mac_to_bc_covariance(i2, PowerAllocation{{1.0, 1.0}, 2.0});
    CHECK((sig.matrix() - CMatrix::Identity(2, 2)).norm() < 1e-12);

    const CMatrix h1 = columns({{1.0, 2.0}});
    const HermitianMatrix single = mac_to_bc_covariance(h1, PowerAllocation{{3.0}, 3.0});
    const CMatrix expected = 3.0 * h1 * h1.adjoint() / h1.squaredNorm();
    CHECK((single.matrix() - expected).norm() < 1e-12);

    const CorrelationMatrix r = exp_correlation(3, 0.5);
    for (int t = 0; t < 20; ++t) {
      const CMatrix h = sample_channel(r, 3, t, 5);
      const PowerAllocation alloc = dual_mac_power_alloc(h, 10.0);
      const auto users = mac_to_bc_user_covariances(h, alloc);
      const HermitianMatrix total = mac_to_bc_covariance(h, alloc);
      CHECK(total.trace() == doctest::Approx(10.0).epsilon(1e-9));
      CHECK(bc_dpc_sum_rate(h, users) == doctest::Approx(dual_mac_objective(h, alloc.powers)).epsilon(1e-9));
      // Duality holds for any allocation, not only the optimal one.
      const PowerAllocation skewed{{1.0, 2.0, 4.0}, 7.0};
      CHECK(bc_dpc_sum_rate(h, mac_to_bc_user_covariances(h, skewed)) ==
            doctest::Approx(dual_mac_objective(h, skewed.powers)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(mac_to_bc_covariance(i2, PowerAllocation{{-1.0, 1.0}, 2.0}), ModelError);
  }

  TEST_CASE("mean input covariance") {
    SimConfig cfg;
    cfg.p_c = 0.0;
    CHECK(estimate_mean_covariance(cfg).sigma_matrix.matrix().norm() == 0.0);

    cfg.p_c = 3.0;
    cfg.sigma_trials = 2000;
    const MeanInputCovariance s = estimate_mean_covariance(cfg);
    CHECK(s.sigma_matrix.trace() <= cfg.p_c + 1e-9);
    CHECK(hermitian_eig(s.sigma_matrix).eigenvalues.minCoeff() >= -1e-12);

    SimConfig single;
    single.K = 1;
    single.rho_cu = 0.0;
    single.p_c = 2.0;
    single.sigma_trials = 10'000;
    const CMatrix iso = estimate_mean_covariance(single).sigma_matrix.matrix();
    for (int i = 0; i < 2; ++i) CHECK(std::abs(iso(i, i).real() - 1.0) < 0.02);
    CHECK(std::abs(iso(0, 1)) < 0.02);

    CHECK((cached_mean_covariance(cfg).sigma_matrix.matrix() - s.sigma_matrix.matrix()).norm() == 0.0);
  }

  TEST_CASE("scalar Rayleigh outage and ergodic rate") {
    SimConfig cfg = scalar_config();
    const MonteCarloEstimate op = dl_outage_prob(cfg, 1.0, 1.0);
    CHECK(std::abs(op.mean - (1.0 - std::exp(-1.0))) < 3.0 * op.std_error);
    CHECK(dl_outage_prob(cfg, 1.0, 0.0).mean == 1.0);
    CHECK(dl_outage_prob(cfg, 0.0, 1.0).mean == 0.0);

    cfg.trials = 200'000;
    const MonteCarloEstimate ecr = dl_ecr(cfg, 1.0);
    const double exact = -std::exp(1.0) * std::expint(-1.0) / std::numbers::ln2;
    CHECK(exact == doctest::Approx(0.8603).epsilon(1e-4));
    CHECK(std::abs(ecr.mean - exact) < 3.0 * ecr.std_error);
    CHECK(dl_ecr(cfg, 0.0).mean == 0.0);
  }

  TEST_CASE("outage bounds never change the outage event") {
    SimConfig cfg;
    cfg.seed = 12;
    cfg.outage_min_events = 1'000'000;
    cfg.outage_max_trials = 20'000;
    const CorrelationMatrix r = cfg.user_correlation();
    for (double p_c : {10.0, 100.0}) {
      for (double alpha : {1.0, 0.5}) {
        std::int64_t events = 0;
        for (std::int64_t t = 0; t < cfg.outage_max_trials; ++t) {
          const CMatrix h = sample_channel(r, cfg.K, static_cast<std::uint64_t>(t), cfg.seed);
          events += alpha * dl_sum_rate(h, p_c / alpha) < 5.0;
        }
        const MonteCarloEstimate op = dl_outage_prob_fdsac(cfg, 5.0, alpha, p_c);
        CHECK(op.trials == cfg.outage_max_trials);
        CHECK(op.mean == doctest::Approx(static_cast<double>(events) / cfg.outage_max_trials));
      }
    }
  }

  TEST_CASE("closed-form i.i.d. constant") {
    CHECK(ed_closed_form_iid(2, 1) == doctest::Approx(0.60995).epsilon(1e-4));
    CHECK(ed_closed_form_iid(2, 2) == doctest::Approx(-0.22280).epsilon(1e-4));
    CHECK(ed_closed_form_iid(4, 2) == doctest::Approx(3.14350).epsilon(1e-4));
    const oracle::WishartEstimate mc = oracle::wishart_logdet(4, 2, 50'000, 3);
    CHECK(std::abs(mc.mean - ed_closed_form_iid(4, 2)) < 0.02);
    CHECK_THROWS_AS(ed_closed_form_iid(1, 2), ModelError);

    CHECK(dl_ecr_asymptote(2.0, 2, -0.2228) == doctest::Approx(-0.2228));
    CHECK(dl_ecr_asymptote(100.0, 2, -0.2228) == doctest::Approx(2.0 * std::log2(50.0) - 0.2228));
  }

  TEST_CASE("frequency-division downlink") {
    SimConfig cfg;
    cfg.trials = 20'000;
    const double p_c = 100.0;
    CHECK(dl_ecr_fdsac(cfg, 1.0, p_c).mean == dl_ecr(cfg, p_c).mean);
    CHECK(dl_ecr_fdsac(cfg, 0.0, p_c).mean == 0.0);
    CHECK(dl_ecr_fdsac(cfg, 0.5, p_c).mean < dl_ecr(cfg, p_c).mean);
    CHECK(dl_outage_prob_fdsac(cfg, 5.0, 1.0, 10.0).mean == dl_outage_prob(cfg, 5.0, 10.0).mean);
  }
}
