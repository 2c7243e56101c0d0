#pragma once

#include <cmath>
#include <cstdint>

namespace wpnn {

/// Counter-based deterministic random generator (SplitMix64 stream).
/// The state advances by a fixed increment per draw, so a generator is fully
/// described by (seed, number of draws) and never shares global state.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  uint64_t uniform_index(uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double two_pi_u2 = 2.0 * M_PI * u2;
    spare_ = mag * std::sin(two_pi_u2);
    has_spare_ = true;
    return mag * std::cos(two_pi_u2);
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wpnn
