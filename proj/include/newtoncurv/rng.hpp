#pragma once

// Deterministic random streams.  Every randomized trial draws from a stream
// keyed by (seed, stream-id) so results are independent of thread count and
// platform.

#include <cstdint>

namespace newtoncurv {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t stream) {
    state_ = seed ^ 0x6a09e667f3bcc909ULL;
    splitmix64(state_);
    state_ ^= stream * 0x2545f4914f6cdd1dULL;
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [-1, 1).
  double uniform_pm1() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  }

  /// Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

 private:
  std::uint64_t state_;
};

}  // namespace newtoncurv
