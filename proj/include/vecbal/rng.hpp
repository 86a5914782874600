#pragma once

// Counter-mixing random stream with a bit-identical output sequence on every
// platform. The i-th output (i = 1, 2, ...) is mix64(seed + i * kGolden),
// which is exactly the SplitMix64 generator.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace vecbal {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Stafford "mix13" avalanche finalizer (the SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of trial `trialIndex` under `masterSeed`:
/// mix64(masterSeed ^ (kGoldenGamma * (trialIndex + 1))), arithmetic mod 2^64.
constexpr std::uint64_t deriveTrialSeed(std::uint64_t masterSeed,
                                        std::uint64_t trialIndex) noexcept {
  return mix64(masterSeed ^ (kGoldenGamma * (trialIndex + 1)));
}

class CounterRng {
public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t seed = 0) noexcept : seed_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix64(seed_ + counter_ * kGoldenGamma);
  }

  /// Uniform on [0, 1) with 53 random bits. One draw.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform on {0, ..., n-1}, as floor(uniform() * n). One draw.
  std::size_t index(std::size_t n) noexcept {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  /// Two independent standard normals by Box-Muller. Two draws.
  void gaussianPair(double& z0, double& z1) noexcept {
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t drawCount() const noexcept { return counter_; }

private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

} // namespace vecbal
