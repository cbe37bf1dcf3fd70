#pragma once

#include <cmath>
#include <cstdint>

#include "bmdm/types.hpp"

namespace bmdm {

// 64-bit finalizer (splitmix64). Full-period, passes BigCrush as a mixer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double to_unit_open(std::uint64_t x) {
  // (0, 1]: never returns 0, so log() below is always finite.
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

// Sequential stream for scenario-structural draws (positions, gain phases).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return to_unit_open(next()); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

// Counter-based complex Gaussian, E|n|^2 = 1. Stateless in (seed, index):
// any (p, n, m) cell can be generated independently of schedule or order.
inline Complex unit_complex_gaussian(std::uint64_t seed, std::uint64_t index) {
  // Domain tag keeps the noise stream disjoint from SplitMix64 sequences
  // seeded with the same value.
  const std::uint64_t key = mix64(seed ^ 0x6e0135e5a1d07a5eULL);
  const std::uint64_t a = mix64(key ^ mix64(index));
  const std::uint64_t b = mix64(a ^ 0xda3e39cb94b95bdbULL);
  const double u1 = to_unit_open(a);
  const double u2 = to_unit_open(b);
  // Box-Muller; the pair feeds real/imag, each N(0, 1/2).
  const double r = std::sqrt(-std::log(u1));
  return Complex(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
}

}  // namespace bmdm
