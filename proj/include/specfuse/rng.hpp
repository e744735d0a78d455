#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "specfuse/grid.hpp"

namespace specfuse {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Substream derivation for parallel trials: the stream for (base, index) is a
/// fixed hash of both, so workers can be scheduled in any order.
inline std::uint64_t derive_stream(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x9e3779b97f4a7c15ull));
}

/// Deterministic random source. Distributions are generated from raw
/// mt19937_64 words with explicit formulas (no std::*_distribution), so the
/// same seed produces the same values on every platform and toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1).
  double unit() { return double(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log argument.
  double open_unit() { return double((gen_() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  double angle() { return uniform(-pi, pi); }

  /// Circular complex Gaussian with E|w|^2 = rms^2 (real and imaginary parts
  /// each N(0, rms^2/2)), via the polar form of Box-Muller.
  cdouble complex_gaussian(double rms) {
    double magnitude = rms * std::sqrt(-std::log(open_unit()));
    double phase = two_pi * unit();
    return std::polar(magnitude, phase);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace specfuse
