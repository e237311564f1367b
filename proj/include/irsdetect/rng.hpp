#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace irsdetect {

/// SplitMix64: a counter-based generator. The i-th output is
/// mix(seed + (i + 1) * 0x9e3779b97f4a7c15), so a stream is fully described
/// by its seed and independent streams come from derive_seed().
class SplitMix64 {
public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform on (0, 1], 53-bit resolution.
  double uniform_open0() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

/// Seed of sub-stream `stream` of `seed`: mix(seed ^ mix(stream * gamma + 1)).
/// Used for per-partition and per-sweep-point streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64::mix(seed ^ SplitMix64::mix(stream * SplitMix64::kGamma + 1));
}

/// CN(0, variance) draws via Box-Muller on SplitMix64 output.
class ComplexGaussian {
public:
  explicit ComplexGaussian(std::uint64_t seed) : rng_(seed) {}

  /// Real and imaginary parts are independent N(0, variance / 2).
  std::complex<double> operator()(double variance) {
    const double radius = std::sqrt(-std::log(rng_.uniform_open0()) * variance);
    const double angle = 2.0 * std::numbers::pi * rng_.uniform();
    return std::polar(radius, angle);
  }

  SplitMix64& engine() { return rng_; }

private:
  SplitMix64 rng_;
};

}  // namespace irsdetect
