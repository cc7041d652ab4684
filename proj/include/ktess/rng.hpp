#pragma once

#include <cstdint>

namespace ktess {

/// Counter-based generator: the i-th draw of stream `seed` is
/// mix64(seed * 0xD1342543DE82EF95 + i * 0x9E3779B97F4A7C15) with i = 1, 2, ...
/// and mix64 the SplitMix64 finalizer. Output depends only on (seed, i), so
/// runs are reproducible across platforms.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    ++counter_;
    return mix64(seed_ * 0xD1342543DE82EF95ULL + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform integer in [0, 2^32).
  std::uint32_t next_u32() { return static_cast<std::uint32_t>(next_u64() >> 32); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace ktess
