#include "isac/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "isac/errors.hpp"

namespace isac {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::int64_t count, unsigned threads,
                  const std::function<void(std::int64_t)>& body) {
  if (count <= 0) return;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(resolve_threads(threads), count));
  if (workers == 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

MonteCarloEstimate mc_mean(std::int64_t trials, std::uint64_t seed, unsigned threads,
                           const std::function<double(std::int64_t)>& sample) {
  if (trials < 1) throw ModelError("mc_mean: trials must be >= 1");
  const std::int64_t blocks = (trials + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<double> sums(blocks, 0.0);
  std::vector<double> squares(blocks, 0.0);
  parallel_for(blocks, threads, [&](std::int64_t b) {
    const std::int64_t lo = b * kMonteCarloBlock;
    const std::int64_t hi = std::min(trials, lo + kMonteCarloBlock);
    double s = 0.0;
    double q = 0.0;
    for (std::int64_t t = lo; t < hi; ++t) {
      const double v = sample(t);
      s += v;
      q += v * v;
    }
    sums[b] = s;
    squares[b] = q;
  });

  double s = 0.0;
  double q = 0.0;
  for (std::int64_t b = 0; b < blocks; ++b) {
    s += sums[b];
    q += squares[b];
  }
  const double n = static_cast<double>(trials);
  MonteCarloEstimate est;
  est.mean = s / n;
  est.trials = trials;
  est.seed = seed;
  if (trials > 1) {
    const double var = std::max(0.0, (q - n * est.mean * est.mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
  }
  if (!std::isfinite(est.mean)) throw NumericalError("mc_mean: non-finite sample mean");
  return est;
}

MonteCarloEstimate mc_probability(const AdaptivePolicy& policy, std::uint64_t seed,
                                  unsigned threads,
                                  const std::function<bool(std::int64_t)>& event) {
  if (policy.max_trials < 1 || policy.round_trials < 1) {
    throw ModelError("mc_probability: trial limits must be positive");
  }
  const std::int64_t round = std::max<std::int64_t>(kMonteCarloBlock,
      (policy.round_trials / kMonteCarloBlock) * kMonteCarloBlock);
  std::int64_t done = 0;
  std::int64_t events = 0;
  while (done < policy.max_trials) {
    const std::int64_t this_round = std::min(round, policy.max_trials - done);
    const std::int64_t blocks = (this_round + kMonteCarloBlock - 1) / kMonteCarloBlock;
    std::vector<std::int64_t> counts(blocks, 0);
    parallel_for(blocks, threads, [&](std::int64_t b) {
      const std::int64_t lo = done + b * kMonteCarloBlock;
      const std::int64_t hi = std::min(done + this_round, lo + kMonteCarloBlock);
      std::int64_t c = 0;
      for (std::int64_t t = lo; t < hi; ++t) c += event(t) ? 1 : 0;
      counts[b] = c;
    });
    for (auto c : counts) events += c;
    done += this_round;
    if (events >= policy.min_events && done >= policy.min_trials) break;
  }
  MonteCarloEstimate est;
  est.trials = done;
  est.seed = seed;
  est.mean = static_cast<double>(events) / static_cast<double>(done);
  est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(done));
  return est;
}

}  // namespace isac
