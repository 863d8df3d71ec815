#pragma once

// Counter-based randomness. Every draw is a pure function of (seed, counter),
// so any partition of the counter space across workers reproduces the serial
// sequence bit for bit.

#include <cmath>
#include <cstdint>

#include "crofton/numerics.hpp"

namespace crofton {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  /// Independent child stream, e.g. one per Monte Carlo sample or block.
  RandomStream derive(std::uint64_t index) const {
    return RandomStream(splitmix64(seed_ ^ splitmix64(index ^ 0x5851f42d4c957f2dULL)), 0);
  }

  std::uint64_t next_u64() { return splitmix64(splitmix64(seed_) ^ (counter_++ * 0xd1b54a32d192ed03ULL)); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard complex Gaussian: real and imaginary parts independent N(0, 1/2).
  cplx complex_gaussian() {
    const double r = std::sqrt(-std::log(uniform()));
    const double theta = 2.0 * kPi * uniform();
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

inline CVector sample_complex_gaussian(RandomStream& stream, int m) {
  if (m < 1) throw InputError("sample_complex_gaussian: dimension must be >= 1");
  CVector v(m);
  for (int i = 0; i < m; ++i) v[i] = stream.complex_gaussian();
  return v;
}

}  // namespace crofton
