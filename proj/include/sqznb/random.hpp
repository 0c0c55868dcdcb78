#pragma once

// Counter-based random streams for reproducible Monte Carlo.
//
// Algorithm (fixed, part of the reproducibility contract):
//   key    = mix64(seed + 0x9E3779B97F4A7C15)
//   state  = mix64(key ^ (stream * 0xD1B54A32D192ED03 + 1))
//   next() : state += 0x9E3779B97F4A7C15; return mix64(state)
// where mix64 is the SplitMix64 finalizer. Uniforms use the top 53 bits,
// offset by half an ulp so they lie in (0, 1). Normals use the Box-Muller
// transform; both outputs of a pair are consumed in order.
//
// Stream k depends only on (seed, k), so work split across any number of
// threads draws identical numbers for the same sample index.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sqznb {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix64(mix64(seed + kGolden) ^ (stream * 0xD1B54A32D192ED03ULL + 1))) {}

  std::uint64_t next() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform in the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double standard_normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double phase = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(phase);
    has_spare_ = true;
    return radius * std::cos(phase);
  }

  double normal(double mean, double sigma) noexcept { return mean + sigma * standard_normal(); }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sqznb
