#pragma once

#include <stdexcept>
#include <vector>

#include "specfuse/covariance.hpp"
#include "specfuse/fft.hpp"
#include "specfuse/grid.hpp"
#include "specfuse/mat_field.hpp"
#include "specfuse/signal_model.hpp"
#include "specfuse/window.hpp"

namespace specfuse {

/// 2x2 spectrum estimate on the centered frequency grid
/// w_j(g) = -pi + 2*pi*g/G_j. Hermitian (up to documented tolerance).
struct SpectrumField {
  Dims3 grid{};
  MatField3 values;

  SpectrumField() = default;
  explicit SpectrumField(const Dims3& g) : grid(g), values(g) {}

  double omega(int axis, int g) const { return grid_omega(grid[axis], g); }
  Mat2c at(int g1, int g2, int g3) const { return values.at(g1, g2, g3); }
};

/// Finite Fourier transforms of both channels on a centered size-G grid.
struct ChannelTransforms {
  Dims3 grid{};
  std::array<std::vector<cdouble>, 2> channels;

  cdouble at(int channel, int g1, int g2, int g3) const {
    return channels[channel][flat_index(grid, g1, g2, g3)];
  }
};

namespace detail {

// Evaluate sum_t x(t) exp(-i<t, w>) on the centered G-grid via one FFT:
// exp(-i*t*(-pi + 2*pi*g/G)) = (-1)^t * exp(-2*pi*i*t*g/G), so modulating the
// padded input by (-1)^(t1+t2+t3) turns the plain DFT into the centered one.
// The modulation factor is exactly representable, so no rounding enters here.
inline std::vector<cdouble> centered_transform(const Dims3& in_dims,
                                               const cdouble* in, const Dims3& g) {
  std::vector<cdouble> padded(count(g), cdouble{});
  for_each_index(in_dims, [&](int t1, int t2, int t3) {
    double sign = ((t1 + t2 + t3) & 1) ? -1.0 : 1.0;
    padded[flat_index(g, t1, t2, t3)] = sign * in[flat_index(in_dims, t1, t2, t3)];
  });
  std::vector<cdouble> out(count(g));
  fft3_forward(g, padded.data(), out.data());
  return out;
}

}  // namespace detail

/// y_hat_N(w) = sum_t y(t) exp(-i<t, w>) for each channel, zero-padded onto
/// the centered G-grid. Requires G_j >= N_j.
inline ChannelTransforms finite_fourier_transform(const DataCube& cube, const Dims3& g) {
  for (int j = 0; j < 3; ++j)
    if (g[j] < cube.dims[j])
      throw std::invalid_argument("finite_fourier_transform: grid smaller than data");
  ChannelTransforms out;
  out.grid = g;
  for (int c = 0; c < 2; ++c)
    out.channels[c] = detail::centered_transform(cube.dims, cube.channel(c), g);
  return out;
}

/// Unwindowed periodogram y_hat(w) y_hat(w)^* / |N| on the (2N-1)-grid.
/// Every value is a rank-one Hermitian PSD matrix by construction.
inline SpectrumField periodogram(const DataCube& cube) {
  const Dims3& n = cube.dims;
  const Dims3 g{2 * n[0] - 1, 2 * n[1] - 1, 2 * n[2] - 1};
  ChannelTransforms hat = finite_fourier_transform(cube, g);
  SpectrumField spec(g);
  const double scale = 1.0 / double(count(n));
  for (std::int64_t f = 0; f < count(g); ++f)
    spec.values.set(f, scale * outer(hat.channels[0][f], hat.channels[1][f]));
  return spec;
}

/// Windowed (Blackman-Tukey) estimate
///   Phi_hat(w) = sum_{|k_j|<=n_j} w(k) Sigma_hat_k exp(-i<k, w>)
/// on the centered G-grid (G defaults to the data size N). Computed by
/// relabeling the weighted lags to l = k + n, zero-padding to G, one FFT per
/// matrix entry, and multiplying back the phase exp(i<n, w>). Requires
/// 2n_j + 1 <= G_j so the relabeled sequence fits the transform.
///
/// The result is Hermitized, (Phi + Phi^*)/2, unless hermitize is false
/// (diagnostics only: the raw asymmetry is itself a correctness signal).
inline SpectrumField windowed_periodogram(const CovarianceField& cov,
                                          const WindowSpec& win, Dims3 g = {0, 0, 0},
                                          bool hermitize = true) {
  if (g == Dims3{0, 0, 0}) g = cov.data_dims;
  const auto& n = win.widths;
  for (int j = 0; j < 3; ++j) {
    if (n[j] < 0) throw std::invalid_argument("windowed_periodogram: negative width");
    if (n[j] > cov.bounds[j])
      throw std::out_of_range("windowed_periodogram: window wider than stored lags");
    if (2 * n[j] + 1 > g[j])
      throw std::invalid_argument("windowed_periodogram: window too wide for grid");
  }

  // Per-axis factors of exp(i n_j w_j(g)) on the centered grid.
  std::array<std::vector<cdouble>, 3> unshift;
  for (int axis = 0; axis < 3; ++axis) {
    unshift[axis].resize(g[axis]);
    for (int idx = 0; idx < g[axis]; ++idx)
      unshift[axis][idx] = std::polar(1.0, n[axis] * grid_omega(g[axis], idx));
  }

  const Dims3 lag_box = win.lag_box();
  SpectrumField spec(g);
  std::vector<cdouble> weighted(count(g)), transformed(count(g));
  for (int plane = 0; plane < 4; ++plane) {
    std::fill(weighted.begin(), weighted.end(), cdouble{});
    for_each_index(lag_box, [&](int l1, int l2, int l3) {
      int k1 = l1 - n[0], k2 = l2 - n[1], k3 = l3 - n[2];
      double sign = ((l1 + l2 + l3) & 1) ? -1.0 : 1.0;
      cdouble sigma = cov.lags.planes[plane][flat_index(
          cov.lags.dims, k1 + cov.bounds[0], k2 + cov.bounds[1], k3 + cov.bounds[2])];
      weighted[flat_index(g, l1, l2, l3)] = sign * win.value(k1, k2, k3) * sigma;
    });
    fft3_forward(g, weighted.data(), transformed.data());
    auto& out = spec.values.planes[plane];
    for_each_index(g, [&](int g1, int g2, int g3) {
      std::int64_t f = flat_index(g, g1, g2, g3);
      out[f] = transformed[f] * unshift[0][g1] * unshift[1][g2] * unshift[2][g3];
    });
  }

  if (hermitize)
    for (std::int64_t f = 0; f < spec.values.size(); ++f)
      spec.values.set(f, spec.values.at(f).hermitized());
  return spec;
}

struct PositivityReport {
  double min_eigenvalue = 0.0;
  bool nonnegative = true;
};

/// Minimum eigenvalue over the grid of a Hermitian spectrum field. Windowing
/// can push it below zero; this only reports, it never projects.
///
/// The flag answers the mathematical question, not the bit pattern: rank-1
/// bins have an exact zero eigenvalue that floating point lands on either
/// side of, so negativity below roundoff scale still counts as nonnegative.
inline PositivityReport check_positivity(const SpectrumField& spec) {
  PositivityReport report;
  bool first = true;
  double scale = 0.0;
  for (std::int64_t f = 0; f < spec.values.size(); ++f) {
    double eig = spec.values.at(f).min_eigenvalue_hermitian();
    if (first || eig < report.min_eigenvalue) report.min_eigenvalue = eig;
    scale = std::max(scale, spec.values.at(f).max_abs());
    first = false;
  }
  report.nonnegative = report.min_eigenvalue >= -1e-9 * scale;
  return report;
}

}  // namespace specfuse
