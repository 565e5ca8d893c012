#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "isac/channel.hpp"

namespace isac::acceptance {

struct Options {
  std::uint64_t seed = 20220901;
  unsigned threads = 0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  const char* name;
  CriterionResult (*run)(const Options&);
};

// Reference scenario: N = M = 2, L = 4, K = 2, R_T = 0.7^|i-j|, R = 0.8^|i-j|.
SimConfig reference_config(const Options& opt);

const std::vector<Criterion>& criteria();

// Runs one criterion, timing it and turning exceptions into failures.
CriterionResult run_criterion(const Criterion& c, const Options& opt);

std::vector<CriterionResult> run_all(const Options& opt, std::ostream* progress);

// One "PASS|FAIL [id] name: detail" line.
std::string summary_line(const CriterionResult& r);

void write_csv(const std::vector<CriterionResult>& results, std::ostream& csv);

}  // namespace isac::acceptance
