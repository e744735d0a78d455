#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace specfuse {

using cdouble = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Extents of a 3-d index box, e.g. the data size N = [N1, N2, N3]
/// (samples per pulse, pulses, antennas) or a frequency grid size G.
using Dims3 = std::array<int, 3>;

inline std::int64_t count(const Dims3& d) {
  return std::int64_t(d[0]) * d[1] * d[2];
}

/// Row-major flattening, last axis contiguous.
inline std::int64_t flat_index(const Dims3& d, int i, int j, int k) {
  return (std::int64_t(i) * d[1] + j) * d[2] + k;
}

template <typename F>
void for_each_index(const Dims3& d, F&& f) {
  for (int i = 0; i < d[0]; ++i)
    for (int j = 0; j < d[1]; ++j)
      for (int k = 0; k < d[2]; ++k) f(i, j, k);
}

/// Wrap an angle into the canonical half-open interval [-pi, pi).
inline double wrap_to_pi(double x) {
  double y = x - two_pi * std::floor((x + pi) / two_pi);
  // floor rounding can land exactly on +pi for inputs just below a wrap point
  if (y >= pi) y -= two_pi;
  return y;
}

/// Smallest signed angular difference, |result| <= pi.
inline double angle_diff(double a, double b) { return std::remainder(a - b, two_pi); }

/// Centered frequency grid: bin g of a size-G axis sits at -pi + 2*pi*g/G.
inline double grid_omega(int grid_size, int g) {
  return -pi + two_pi * double(g) / double(grid_size);
}

/// Exact inverse of grid_omega for on-grid frequencies.
inline int grid_index_of(int grid_size, double omega) {
  int g = int(std::lround((omega + pi) * double(grid_size) / two_pi));
  if (g < 0 || g >= grid_size) throw std::out_of_range("frequency not on grid");
  return g;
}

/// Dense scalar field over a 3-d index box.
template <typename T>
struct Field3 {
  Dims3 dims{};
  std::vector<T> values;

  Field3() = default;
  explicit Field3(const Dims3& d, T fill = T{}) : dims(d), values(count(d), fill) {}

  T& operator()(int i, int j, int k) { return values[flat_index(dims, i, j, k)]; }
  const T& operator()(int i, int j, int k) const { return values[flat_index(dims, i, j, k)]; }
  std::int64_t size() const { return std::int64_t(values.size()); }
};

}  // namespace specfuse
