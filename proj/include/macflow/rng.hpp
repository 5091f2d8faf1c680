#pragma once

// Counter-based pseudo-random numbers: draw i of stream `seed` is the
// SplitMix64 output at position i of a generator whose state starts at
// mix(seed). Any draw can be computed independently of the others, so
// fields are reproducible byte-for-byte regardless of traversal order.

#include <cstdint>

namespace macflow {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) noexcept {
  const std::uint64_t key = splitmix64_mix(seed + kGoldenGamma);
  return splitmix64_mix(key + (counter + 1) * kGoldenGamma);
}

/// Uniform on [0, 1) with 53 random bits.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
  return static_cast<double>(counter_hash(seed, counter) >> 11) * 0x1.0p-53;
}

/// Sequential view over one counter stream.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t start = 0) noexcept
      : seed_(seed), counter_(start) {}

  constexpr std::uint64_t next_u64() noexcept { return counter_hash(seed_, counter_++); }
  constexpr double uniform() noexcept { return counter_uniform(seed_, counter_++); }
  constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform on (0, hi].
  constexpr double uniform_open_closed(double hi) noexcept { return hi * (1.0 - uniform()); }
  /// Uniform integer in [lo, hi].
  constexpr int uniform_int(int lo, int hi) noexcept {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace macflow
