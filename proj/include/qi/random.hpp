#pragma once

// Reproducible random streams. Only the raw 64-bit output of mt19937_64 is
// used (its sequence is fixed by the C++ standard); conversion to doubles is
// done here so results do not depend on the standard library's distributions.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace qi {

inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64; u=(x>>11)*2^-53; substream k seed=splitmix64(seed+(k+1)*0x9e3779b97f4a7c15)";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the k-th independent substream derived from a base seed.
inline constexpr std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(seed + (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Standard normal via Box-Muller (one value per call, the pair partner is cached).
  double normal() noexcept {
    if (hasSpare_) {
      hasSpare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    hasSpare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool hasSpare_ = false;
};

}  // namespace qi
