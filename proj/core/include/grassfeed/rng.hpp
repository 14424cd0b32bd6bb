#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace grassfeed {

namespace detail {

// SplitMix64 step; used for seeding and substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// xoshiro256++ stream with value semantics. Substreams are derived from a
/// master seed and a path of 64-bit ids, so per-trial streams are independent
/// of scheduling and worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = detail::splitmix64(sm);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  static Rng substream(std::uint64_t master, std::uint64_t id0) {
    std::uint64_t sm = master;
    std::uint64_t h = detail::splitmix64(sm) ^ id0;
    return Rng(detail::splitmix64(h));
  }

  static Rng substream(std::uint64_t master, std::uint64_t id0, std::uint64_t id1) {
    std::uint64_t sm = master;
    std::uint64_t h = detail::splitmix64(sm) ^ id0;
    h = detail::splitmix64(h) ^ id1;
    return Rng(detail::splitmix64(h));
  }

  std::uint64_t next_u64() {
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

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via the Marsaglia polar method (second value cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Circularly symmetric complex Gaussian, zero mean, unit variance:
  /// real and imaginary parts are independent N(0, 1/2).
  std::complex<double> cnormal() {
    constexpr double kInvSqrt2 = 0.7071067811865476;
    const double re = normal() * kInvSqrt2;
    const double im = normal() * kInvSqrt2;
    return {re, im};
  }

  /// Exp(1) variate.
  double exponential() { return -std::log(uniform_pos()); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace grassfeed
