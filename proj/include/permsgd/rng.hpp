#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace permsgd {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Child seed for stream `index` of `base`. A pure function of its
/// arguments, so per-trial streams do not depend on execution order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Counter-based generator: draw i is mix64(key + i * golden). Satisfies
/// UniformRandomBitGenerator so it can drive <random> distributions, but
/// the helpers below are used internally to keep outputs identical across
/// standard library implementations.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's method).
  std::uint32_t below(std::uint32_t bound) noexcept;

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// In-place Fisher-Yates shuffle.
void shuffle(std::span<int> values, CounterRng& rng) noexcept;

}  // namespace permsgd
