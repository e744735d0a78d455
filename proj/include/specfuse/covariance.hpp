#pragma once

#include <stdexcept>
#include <vector>

#include "specfuse/fft.hpp"
#include "specfuse/grid.hpp"
#include "specfuse/mat_field.hpp"
#include "specfuse/signal_model.hpp"

namespace specfuse {

/// Biased sample covariances Sigma_hat_k over the lag box |k_j| <= bounds_j.
/// The full lag set of a size-N cube has bounds N-1. Storage index is
/// k + bounds, row-major.
struct CovarianceField {
  Dims3 data_dims{};              // N of the cube the field came from
  std::array<int, 3> bounds{};    // lag extents, |k_j| <= bounds[j]
  MatField3 lags;

  CovarianceField() = default;
  CovarianceField(const Dims3& n, const std::array<int, 3>& b)
      : data_dims(n), bounds(b),
        lags(Dims3{2 * b[0] + 1, 2 * b[1] + 1, 2 * b[2] + 1}) {}

  bool in_bounds(int k1, int k2, int k3) const {
    return std::abs(k1) <= bounds[0] && std::abs(k2) <= bounds[1] &&
           std::abs(k3) <= bounds[2];
  }

  Mat2c at(int k1, int k2, int k3) const {
    if (!in_bounds(k1, k2, k3)) throw std::out_of_range("covariance lag out of bounds");
    return lags.at(k1 + bounds[0], k2 + bounds[1], k3 + bounds[2]);
  }

  void set(int k1, int k2, int k3, const Mat2c& m) {
    if (!in_bounds(k1, k2, k3)) throw std::out_of_range("covariance lag out of bounds");
    lags.set(k1 + bounds[0], k2 + bounds[1], k3 + bounds[2], m);
  }

  template <typename F>
  void for_each_lag(F&& f) const {
    for (int k1 = -bounds[0]; k1 <= bounds[0]; ++k1)
      for (int k2 = -bounds[1]; k2 <= bounds[1]; ++k2)
        for (int k3 = -bounds[2]; k3 <= bounds[2]; ++k3) f(k1, k2, k3);
  }
};

/// Reference path: Sigma_hat_k = (1/|N|) sum over s of y(s+k) y(s)^*, where s
/// runs over all positions keeping both s and s+k inside the cube. Explicit
/// summation; the oracle the FFT path is checked against.
inline CovarianceField covariances_direct(const DataCube& cube,
                                          const std::array<int, 3>& bounds) {
  const Dims3& n = cube.dims;
  for (int j = 0; j < 3; ++j)
    if (bounds[j] < 0 || bounds[j] > n[j] - 1)
      throw std::out_of_range("covariances_direct: lag bounds exceed N-1");

  CovarianceField field(n, bounds);
  const double scale = 1.0 / double(count(n));
  field.for_each_lag([&](int k1, int k2, int k3) {
    auto lo = [](int k) { return k >= 0 ? 0 : -k; };
    auto hi = [](int nj, int k) { return k >= 0 ? nj - 1 - k : nj - 1; };
    Mat2c acc{};
    for (int s1 = lo(k1); s1 <= hi(n[0], k1); ++s1)
      for (int s2 = lo(k2); s2 <= hi(n[1], k2); ++s2)
        for (int s3 = lo(k3); s3 <= hi(n[2], k3); ++s3)
          acc += outer_pair(cube.at(0, s1 + k1, s2 + k2, s3 + k3),
                            cube.at(1, s1 + k1, s2 + k2, s3 + k3),
                            cube.at(0, s1, s2, s3), cube.at(1, s1, s2, s3));
    field.set(k1, k2, k3, scale * acc);
  });
  return field;
}

/// Fast path over the full lag set, equivalent to covariances_direct:
///   1. FFT each channel zero-padded to 2N-1;
///   2. form the raw periodogram Y_a(g) conj(Y_b(g)) / |N|;
///   3. inverse FFT of exp(-i<N-1, w_g>) times the periodogram,
/// after which entry l of the result is Sigma_hat at lag l-(N-1).
inline CovarianceField covariances_fft(const DataCube& cube) {
  const Dims3& n = cube.dims;
  const Dims3 g{2 * n[0] - 1, 2 * n[1] - 1, 2 * n[2] - 1};
  const std::int64_t g_count = count(g);

  // Step 1: padded channel transforms on the native DFT grid w_g = 2*pi*g/G.
  std::array<std::vector<cdouble>, 2> channel_hat;
  {
    std::vector<cdouble> padded(g_count);
    for (int c = 0; c < 2; ++c) {
      std::fill(padded.begin(), padded.end(), cdouble{});
      for_each_index(n, [&](int t1, int t2, int t3) {
        padded[flat_index(g, t1, t2, t3)] = cube.at(c, t1, t2, t3);
      });
      channel_hat[c].resize(g_count);
      fft3_forward(g, padded.data(), channel_hat[c].data());
    }
  }

  // Per-axis factors of exp(-i (N_j - 1) * 2*pi*g_j / G_j).
  std::array<std::vector<cdouble>, 3> shift;
  for (int axis = 0; axis < 3; ++axis) {
    shift[axis].resize(g[axis]);
    for (int idx = 0; idx < g[axis]; ++idx)
      shift[axis][idx] = std::polar(1.0, -(n[axis] - 1) * two_pi * idx / g[axis]);
  }

  CovarianceField field(n, {n[0] - 1, n[1] - 1, n[2] - 1});
  const double scale = 1.0 / double(count(n));
  std::vector<cdouble> modulated(g_count), lag_seq(g_count);
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < 2; ++col) {
      // Steps 2 and 3 fused: periodogram entry times the relabeling phase.
      for_each_index(g, [&](int g1, int g2, int g3) {
        std::int64_t f = flat_index(g, g1, g2, g3);
        cdouble p = channel_hat[row][f] * std::conj(channel_hat[col][f]) * scale;
        modulated[f] = p * shift[0][g1] * shift[1][g2] * shift[2][g3];
      });
      fft3_inverse(g, modulated.data(), lag_seq.data());
      // lag_seq index l corresponds to lag k = l - (N-1), which is exactly
      // the storage index of the field (bounds == N-1).
      auto& plane = field.lags.planes[MatField3::plane_of(row, col)];
      plane.assign(lag_seq.begin(), lag_seq.end());
    }
  }
  return field;
}

/// Copy of the lags inside |k_j| <= new_bounds_j.
inline CovarianceField restrict_lags(const CovarianceField& field,
                                     const std::array<int, 3>& new_bounds) {
  for (int j = 0; j < 3; ++j)
    if (new_bounds[j] > field.bounds[j])
      throw std::out_of_range("restrict_lags: requested bounds exceed stored lags");
  CovarianceField out(field.data_dims, new_bounds);
  out.for_each_lag(
      [&](int k1, int k2, int k3) { out.set(k1, k2, k3, field.at(k1, k2, k3)); });
  return out;
}

}  // namespace specfuse
