// isac_sim: runs one named experiment and writes its CSV.
//
//   isac_sim --experiment op_vs_snr --out op.csv
//   isac_sim --config fig3.json --seed 7 --threads 4

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "isac/errors.hpp"
#include "isac/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCriterionFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int fail(int code, const std::string& kind, const std::string& message) {
  nlohmann::json line = {{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << line.dump() << std::endl;
  return code;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw isac::ModelError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_acceptance(const isac::ExperimentSpec& spec) {
  isac::acceptance::Options opt;
  opt.seed = spec.config.seed;
  opt.threads = spec.config.threads;
  const auto results = isac::acceptance::run_all(opt, &std::cout);
  if (!spec.output_path.empty()) {
    std::ofstream out(spec.output_path);
    isac::acceptance::write_csv(results, out);
  }
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed ? 1 : 0;
  std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
  return passed == results.size() ? kExitOk : kExitCriterionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ISAC performance experiments"};
  std::string config_path;
  std::string experiment;
  std::string out_path;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  app.add_option("--config", config_path, "JSON experiment spec");
  app.add_option("--experiment", experiment,
                 "op_vs_snr, ecr_vs_snr, sr_vs_snr, region_dl, region_ul or acceptance");
  auto* seed_opt = app.add_option("--seed", seed, "Overrides the config seed");
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitConfig, "usage", e.what());
  }

  isac::ExperimentSpec spec;
  try {
    if (!config_path.empty()) spec = isac::parse_spec_json(read_file(config_path));
    if (!experiment.empty()) {
      const auto name = isac::parse_experiment_name(experiment);
      if (!name) throw isac::ModelError("unknown experiment '" + experiment + "'");
      spec.name = *name;
    } else if (config_path.empty()) {
      throw isac::ModelError("either --config or --experiment is required");
    }
    if (*seed_opt) spec.config.seed = seed;
    if (*threads_opt) spec.config.threads = threads;
    if (!out_path.empty()) spec.output_path = out_path;
    spec.validate();
  } catch (const isac::ModelError& e) {
    return fail(kExitConfig, "config", e.what());
  }

  try {
    if (spec.name == isac::ExperimentName::kAcceptance) return run_acceptance(spec);

    // Render fully before touching the output file so a failed run never
    // leaves a truncated CSV behind.
    std::ostringstream csv;
    isac::run_experiment(spec, csv, std::cerr);
    if (spec.output_path.empty()) {
      std::cout << csv.str();
    } else {
      std::ofstream out(spec.output_path, std::ios::binary);
      if (!out) throw isac::ModelError("cannot write '" + spec.output_path + "'");
      out << csv.str();
    }
  } catch (const isac::ModelError& e) {
    return fail(kExitConfig, "config", e.what());
  } catch (const isac::NumericalError& e) {
    return fail(kExitNumerical, "numerical", e.what());
  } catch (const std::exception& e) {
    return fail(kExitNumerical, "internal", e.what());
  }
  return kExitOk;
}
