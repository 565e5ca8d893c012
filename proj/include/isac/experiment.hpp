#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isac/channel.hpp"
#include "isac/montecarlo.hpp"

namespace isac {

enum class ExperimentName { kOpVsSnr, kEcrVsSnr, kSrVsSnr, kRegionDl, kRegionUl, kAcceptance };

std::string to_string(ExperimentName name);
std::optional<ExperimentName> parse_experiment_name(std::string_view text);

struct SweepGrid {
  double start_db = 0.0;
  double stop_db = 40.0;
  double step_db = 2.5;

  std::vector<double> values_db() const;
  bool operator==(const SweepGrid&) const = default;
};

// Everything needed to run one named experiment. Powers are authored in dB;
// config.p_c / config.p_s hold the linear values derived from them. For the
// region experiments p_c_db / p_s_db are the sweep maxima.
struct ExperimentSpec {
  ExperimentName name = ExperimentName::kEcrVsSnr;
  SimConfig config;
  double p_c_db = 5.0;
  double p_s_db = 10.0;
  double rate_target = 5.0;
  double alpha = 0.5;
  SweepGrid sweep;
  int grid_size = 41;
  std::string output_path;

  void validate() const;
};

bool operator==(const SimConfig& a, const SimConfig& b);
bool operator==(const ExperimentSpec& a, const ExperimentSpec& b);

double db_to_linear(double db);

// JSON document with keys mirroring the field names above (SimConfig fields
// at top level, "sweep" as an object). Unknown keys are rejected.
ExperimentSpec parse_spec_json(std::string_view text);
std::string spec_to_json(const ExperimentSpec& spec);

// Fixed 10-significant-digit rendering used in every CSV.
std::string format_number(double v);

// Writes the CSV for every experiment except kAcceptance. Linear powers are
// re-derived from p_c_db / p_s_db. Progress lines go to `log`. Output depends only on the spec, never on spec.config.threads.
void run_experiment(const ExperimentSpec& spec, std::ostream& csv, std::ostream& log);

}  // namespace isac
