#pragma once

#include <array>
#include <vector>

#include "specfuse/grid.hpp"
#include "specfuse/mat2.hpp"

namespace specfuse {

/// 2x2-matrix-valued field over a 3-d index box. Entries are stored as four
/// contiguous planes (order 11, 12, 21, 22) so each channel pair can go
/// through the FFT independently.
struct MatField3 {
  Dims3 dims{};
  std::array<std::vector<cdouble>, 4> planes;

  MatField3() = default;
  explicit MatField3(const Dims3& d) : dims(d) {
    for (auto& p : planes) p.assign(count(d), cdouble{});
  }

  static constexpr int plane_of(int row, int col) { return 2 * row + col; }

  Mat2c at(std::int64_t flat) const {
    return {planes[0][flat], planes[1][flat], planes[2][flat], planes[3][flat]};
  }
  Mat2c at(int i, int j, int k) const { return at(flat_index(dims, i, j, k)); }

  void set(std::int64_t flat, const Mat2c& m) {
    planes[0][flat] = m.m11;
    planes[1][flat] = m.m12;
    planes[2][flat] = m.m21;
    planes[3][flat] = m.m22;
  }
  void set(int i, int j, int k, const Mat2c& m) { set(flat_index(dims, i, j, k), m); }

  std::int64_t size() const { return count(dims); }
};

}  // namespace specfuse
