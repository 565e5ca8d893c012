#pragma once

#include <cstdint>
#include <functional>

namespace isac {

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

// Stopping rule for probability estimates: keep sampling until `min_events`
// successes were seen or `max_trials` were spent. Trials are consumed in
// rounds of `round_trials`, and the rule is only checked between rounds.
struct AdaptivePolicy {
  std::int64_t min_events = 200;
  std::int64_t max_trials = 10'000'000;
  std::int64_t min_trials = 10'000;
  std::int64_t round_trials = 65'536;
};

// Trials are grouped into fixed blocks; blocks are summed in index order so
// results are identical for any worker count.
inline constexpr std::int64_t kMonteCarloBlock = 1024;

// 0 means "use std::thread::hardware_concurrency()".
unsigned resolve_threads(unsigned requested);

// Runs body(i) for i in [0, count) across `threads` workers.
void parallel_for(std::int64_t count, unsigned threads,
                  const std::function<void(std::int64_t)>& body);

// Sample mean of sample(trial) over trials [0, trials).
MonteCarloEstimate mc_mean(std::int64_t trials, std::uint64_t seed, unsigned threads,
                           const std::function<double(std::int64_t)>& sample);

// Fraction of trials where event(trial) is true, sampled adaptively.
MonteCarloEstimate mc_probability(const AdaptivePolicy& policy, std::uint64_t seed,
                                  unsigned threads,
                                  const std::function<bool(std::int64_t)>& event);

}  // namespace isac
