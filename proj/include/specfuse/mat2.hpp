#pragma once

#include <cmath>
#include <complex>

#include "specfuse/grid.hpp"

namespace specfuse {

/// 2x2 complex matrix, the value type of covariance and spectrum fields
/// for the two-channel receiver model.
struct Mat2c {
  cdouble m11{}, m12{}, m21{}, m22{};

  Mat2c adjoint() const {
    return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
  }

  Mat2c hermitized() const {
    Mat2c a = adjoint();
    return {0.5 * (m11 + a.m11), 0.5 * (m12 + a.m12), 0.5 * (m21 + a.m21),
            0.5 * (m22 + a.m22)};
  }

  cdouble det() const { return m11 * m22 - m12 * m21; }

  double frobenius_sq() const {
    return std::norm(m11) + std::norm(m12) + std::norm(m21) + std::norm(m22);
  }

  double max_abs() const {
    return std::max(std::max(std::abs(m11), std::abs(m12)),
                    std::max(std::abs(m21), std::abs(m22)));
  }

  /// Smaller eigenvalue, valid for Hermitian matrices (closed form).
  double min_eigenvalue_hermitian() const {
    double a = m11.real(), d = m22.real();
    return 0.5 * (a + d) - std::hypot(0.5 * (a - d), std::abs(m12));
  }

  Mat2c& operator+=(const Mat2c& o) {
    m11 += o.m11;
    m12 += o.m12;
    m21 += o.m21;
    m22 += o.m22;
    return *this;
  }

  friend Mat2c operator*(cdouble s, const Mat2c& m) {
    return {s * m.m11, s * m.m12, s * m.m21, s * m.m22};
  }
  friend Mat2c operator*(double s, const Mat2c& m) {
    return {s * m.m11, s * m.m12, s * m.m21, s * m.m22};
  }
  friend Mat2c operator-(const Mat2c& x, const Mat2c& y) {
    return {x.m11 - y.m11, x.m12 - y.m12, x.m21 - y.m21, x.m22 - y.m22};
  }
};

/// v v^* for the stacked channel sample v = [v1 v2]^T. The diagonal is formed
/// as |v|^2 directly so it is real by construction.
inline Mat2c outer(cdouble v1, cdouble v2) {
  return {cdouble(std::norm(v1), 0.0), v1 * std::conj(v2), v2 * std::conj(v1),
          cdouble(std::norm(v2), 0.0)};
}

/// u w^* for two different stacked samples u = [u1 u2]^T, w = [w1 w2]^T.
inline Mat2c outer_pair(cdouble u1, cdouble u2, cdouble w1, cdouble w2) {
  return {u1 * std::conj(w1), u1 * std::conj(w2), u2 * std::conj(w1),
          u2 * std::conj(w2)};
}

}  // namespace specfuse
