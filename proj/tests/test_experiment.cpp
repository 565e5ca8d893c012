#include <sstream>
#include <string>

#include <doctest.h>

#include "isac/errors.hpp"
#include "isac/experiment.hpp"

using namespace isac;

namespace {

ExperimentSpec quick(ExperimentName name) {
  ExperimentSpec s;
  s.name = name;
  s.config.trials = 2048;
  s.config.sigma_trials = 1024;
  s.config.outage_min_events = 20;
  s.config.outage_max_trials = 70'000;
  s.sweep = {0.0, 20.0, 10.0};
  s.grid_size = 4;
  return s;
}

std::string run(const ExperimentSpec& s) {
  std::ostringstream csv, log;
  run_experiment(s, csv, log);
  return csv.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("experiment names") {
    for (auto n : {ExperimentName::kOpVsSnr, ExperimentName::kEcrVsSnr, ExperimentName::kSrVsSnr,
                   ExperimentName::kRegionDl, ExperimentName::kRegionUl, ExperimentName::kAcceptance})
      CHECK(parse_experiment_name(to_string(n)) == n);
    CHECK_FALSE(parse_experiment_name("fig9").has_value());
  }

  TEST_CASE("config round trip") {
    ExperimentSpec s = quick(ExperimentName::kRegionUl);
    s.config.seed = 0xfeedfacecafebeefULL;
    s.config.rho_cu = 0.3;
    s.p_c_db = 7.5;
    s.output_path = "out.csv";
    const ExperimentSpec back = parse_spec_json(spec_to_json(s));
    CHECK(parse_spec_json(spec_to_json(back)) == back);
    CHECK(back.config.seed == s.config.seed);
    CHECK(back.p_c_db == 7.5);
    CHECK(back.config.p_c == doctest::Approx(db_to_linear(7.5)));
  }

  TEST_CASE("bad configs are rejected") {
    CHECK_THROWS_AS(parse_spec_json("{\"experiment\": \"ecr_vs_snr\", \"bogus\": 1}"), ModelError);
    CHECK_THROWS_AS(parse_spec_json("{\"experiment\": \"nope\"}"), ModelError);
    CHECK_THROWS_AS(parse_spec_json("{\"experiment\": \"ecr_vs_snr\", \"M\": 1}"), ModelError);
    CHECK_THROWS_AS(parse_spec_json("not json"), ModelError);
    ExperimentSpec s = quick(ExperimentName::kEcrVsSnr);
    s.sweep.step_db = 0.0;
    CHECK_THROWS_AS(s.validate(), ModelError);
  }

  TEST_CASE("CSV headers") {
    CHECK(first_line(run(quick(ExperimentName::kOpVsSnr))) == "p_c_db,system,op,std_err,trials");
    CHECK(first_line(run(quick(ExperimentName::kEcrVsSnr))) == "p_c_db,system,ecr,std_err,trials");
    CHECK(first_line(run(quick(ExperimentName::kSrVsSnr))) ==
          "p_s_db,system,sr,sr_highsnr,highsnr_valid");
    CHECK(first_line(run(quick(ExperimentName::kRegionUl))) ==
          "system,sweep_param,sweep_value,cr,cr_std_err,sr");
  }

  TEST_CASE("op_vs_snr has one row per point and system") {
    const std::string csv = run(quick(ExperimentName::kOpVsSnr));
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 1 + 3 * 4);
    CHECK(csv.find("\n10,ufdsac,") != std::string::npos);
  }

  TEST_CASE("identical specs give identical bytes at any thread count") {
    ExperimentSpec s = quick(ExperimentName::kEcrVsSnr);
    s.config.threads = 1;
    const std::string one = run(s);
    s.config.threads = 3;
    CHECK(run(s) == one);
    s.config.seed += 1;
    CHECK(run(s) != one);
  }

  TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333");
    CHECK(format_number(2.5e-7) == "2.5e-07");
  }
}
