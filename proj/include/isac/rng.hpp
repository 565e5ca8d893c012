#pragma once

#include <cstdint>
#include <limits>

namespace isac {

// Identifies independent random streams that share a (seed, trial) pair.
enum class Stream : std::uint64_t {
  kDownlinkChannel = 1,
  kUplinkChannel = 2,
  kAuxiliary = 3,
};

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// SplitMix64 generator whose starting state is a hash of (seed, trial, stream).
// Any trial can be regenerated on its own, so Monte Carlo results do not
// depend on which worker runs which trial.
class TrialRng {
 public:
  using result_type = std::uint64_t;

  TrialRng(std::uint64_t seed, std::uint64_t trial, Stream stream) noexcept
      : state_(splitmix64_mix(splitmix64_mix(seed ^ 0x6a09e667f3bcc909ULL) ^
                              splitmix64_mix(trial + 0x9e3779b97f4a7c15ULL) ^
                              (static_cast<std::uint64_t>(stream) << 56))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state_);
  }

 private:
  std::uint64_t state_;
};

}  // namespace isac
