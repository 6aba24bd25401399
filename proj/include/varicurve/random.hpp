#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace varicurve {

/// Counter-based generator: every draw is SplitMix64 applied to
/// (seed, stream, counter), so results depend only on those three integers and
/// are identical on every platform and under any thread schedule.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  static constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return splitmix64(splitmix64(seed_ ^ splitmix64(stream_)) + counter);
  }

  /// Uniform in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller on draws 2k and 2k+1.
  double normal(std::uint64_t k) const noexcept {
    const double u1 = 1.0 - uniform(2 * k);  // (0, 1]
    const double u2 = uniform(2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace varicurve
