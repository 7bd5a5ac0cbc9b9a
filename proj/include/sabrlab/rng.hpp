#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace sabrlab {

// SplitMix64 Weyl increment. Substreams are positions on the SplitMix64
// sequence: path_index golden-gamma steps away from master_seed.
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += kGoldenGamma);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// One Monte Carlo substream identity. Same (master_seed, path_index) pair
/// reproduces the same stream bit for bit; distinct path indices start at
/// distinct SplitMix64 positions.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;

  std::uint64_t origin() const { return master_seed + path_index * kGoldenGamma; }
};

/// xoshiro256++ engine, state filled from SplitMix64.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(SeedSpec seed) {
    std::uint64_t s = seed.origin();
    for (auto& w : state_) w = splitmix64_next(s);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
};

/// Standard normal draws (Marsaglia polar, one cached deviate).
class NormalSampler {
 public:
  explicit NormalSampler(SeedSpec seed) : engine_(seed) {}

  double normal() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    double v1, v2, s;
    do {
      v1 = 2.0 * engine_.uniform01() - 1.0;
      v2 = 2.0 * engine_.uniform01() - 1.0;
      s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cache_ = v2 * f;
    has_cache_ = true;
    return v1 * f;
  }

  /// Pair (xi_w, xi_z) with corr(xi_w, xi_z) = rho, via z = rho*w + rho_bar*w_perp.
  std::array<double, 2> correlated_pair(double rho, double rho_bar) {
    const double a = normal();
    const double b = normal();
    return {a, rho * a + rho_bar * b};
  }

  double uniform01() { return engine_.uniform01(); }

 private:
  Xoshiro256pp engine_;
  double cache_ = 0.0;
  bool has_cache_ = false;
};

}  // namespace sabrlab
