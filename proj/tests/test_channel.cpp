#include <atomic>
#include <cmath>

#include <doctest.h>

#include "isac/channel.hpp"
#include "isac/errors.hpp"
#include "isac/montecarlo.hpp"

using namespace isac;

namespace {

// Empirical E[h h^H] over the first column of `draws` samples.
CMatrix empirical_covariance(const CorrelationMatrix& r, int draws, std::uint64_t seed) {
  const ChannelSampler sampler(r);
  CMatrix acc = CMatrix::Zero(r.dim(), r.dim());
  for (int t = 0; t < draws; ++t) {
    const CMatrix h = sampler.sample(1, static_cast<std::uint64_t>(t), seed);
    acc += h * h.adjoint();
  }
  return acc / static_cast<double>(draws);
}

}  // namespace

TEST_SUITE("channel") {
  TEST_CASE("exponential correlation") {
    const CorrelationMatrix i2 = exp_correlation(2, 0.0);
    CHECK((i2.inner.matrix() - CMatrix::Identity(2, 2)).norm() == 0.0);

    const CorrelationMatrix r2 = exp_correlation(2, 0.7);
    CHECK(r2.inner.matrix()(0, 1).real() == doctest::Approx(0.7));
    CHECK(r2.inner.matrix()(1, 1).real() == doctest::Approx(1.0));

    const CorrelationMatrix r3 = exp_correlation(3, 0.8);
    CHECK(r3.inner.matrix()(0, 2).real() == doctest::Approx(0.64));
    CHECK(r3.inner.matrix()(1, 2).real() == doctest::Approx(0.8));

    CHECK_THROWS_AS(exp_correlation(2, 1.0), ModelError);
    CHECK_THROWS_AS(exp_correlation(2, -0.1), ModelError);
  }

  TEST_CASE("target correlation must be positive definite") {
    const double d[] = {1.0, 0.0};
    CHECK_NOTHROW(make_correlation(HermitianMatrix::diagonal(d), CorrelationLabel::kTransmitCu));
    CHECK_THROWS_AS(make_correlation(HermitianMatrix::diagonal(d), CorrelationLabel::kTransmitTarget),
                    ModelError);
  }

  TEST_CASE("sampling is a pure function of (seed, trial, stream)") {
    const CorrelationMatrix r = exp_correlation(2, 0.8);
    const CMatrix a = sample_channel(r, 2, 42, 7);
    const CMatrix b = sample_channel(r, 2, 42, 7);
    CHECK((a - b).norm() == 0.0);
    CHECK((a - sample_channel(r, 2, 43, 7)).norm() > 0.0);
    CHECK((a - sample_channel(r, 2, 42, 7, Stream::kUplinkChannel)).norm() > 0.0);
  }

  TEST_CASE("empirical covariance matches the correlation matrix") {
    for (double rho : {0.0, 0.7}) {
      const CorrelationMatrix r = exp_correlation(2, rho);
      const CMatrix emp = empirical_covariance(r, 100'000, 3);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(emp(i, j) - r.inner.matrix()(i, j)) < 0.02);
    }
  }

  TEST_CASE("config validation") {
    SimConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.K = 3;
    CHECK_THROWS_AS(cfg.validate(), ModelError);
    cfg = SimConfig{};
    cfg.L = 1;
    CHECK_THROWS_AS(cfg.validate(), ModelError);
    cfg = SimConfig{};
    cfg.p_c = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ModelError);
  }

  TEST_CASE("draws use independent streams") {
    SimConfig cfg;
    const ChannelDraw d = draw_channels(cfg, 5);
    CHECK(d.h_downlink.rows() == cfg.M);
    CHECK(d.h_downlink.cols() == cfg.K);
    CHECK(d.h_uplink.rows() == cfg.N);
    CHECK(d.h_uplink.cols() == cfg.K);
  }
}

TEST_SUITE("montecarlo") {
  TEST_CASE("mean estimates do not depend on the thread count") {
    auto f = [](std::int64_t t) { return std::sin(static_cast<double>(t)) * 1e-3 + 1.0 / (1 + t); };
    const MonteCarloEstimate a = mc_mean(50'000, 9, 1, f);
    const MonteCarloEstimate b = mc_mean(50'000, 9, 3, f);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.trials == 50'000);
    CHECK(a.seed == 9);
  }

  TEST_CASE("constant samples have zero standard error") {
    const MonteCarloEstimate e = mc_mean(4096, 1, 2, [](std::int64_t) { return 2.5; });
    CHECK(e.mean == doctest::Approx(2.5));
    CHECK(e.std_error == doctest::Approx(0.0));
  }

  TEST_CASE("adaptive probability stops once enough events are seen") {
    AdaptivePolicy policy;
    policy.min_events = 200;
    const MonteCarloEstimate e =
        mc_probability(policy, 1, 2, [](std::int64_t t) { return t % 4 == 0; });
    CHECK(e.mean == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(e.trials < policy.max_trials);
    CHECK(e.trials >= policy.min_trials);

    policy.max_trials = 200'000;
    const MonteCarloEstimate none = mc_probability(policy, 1, 2, [](std::int64_t) { return false; });
    CHECK(none.mean == 0.0);
    CHECK(none.trials >= policy.max_trials);
  }

  TEST_CASE("parallel_for visits every index once and propagates errors") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, 4, [&](std::int64_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS(parallel_for(10, 2, [](std::int64_t i) {
      if (i == 7) throw NumericalError("boom");
    }));
  }
}
