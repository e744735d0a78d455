#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "specfuse/grid.hpp"

namespace specfuse {

enum class WindowKind { rectangular, bartlett };

inline std::string to_string(WindowKind k) {
  return k == WindowKind::rectangular ? "rectangular" : "bartlett";
}

inline WindowKind window_kind_from_string(const std::string& s) {
  if (s == "rectangular" || s == "rect") return WindowKind::rectangular;
  if (s == "bartlett") return WindowKind::bartlett;
  throw std::invalid_argument("unknown window kind: " + s);
}

/// Lag window over the box |k_j| <= n_j. Separable; values in (0, 1].
struct WindowSpec {
  WindowKind kind = WindowKind::rectangular;
  std::array<int, 3> widths{};  // n = [n1, n2, n3], each >= 0

  /// Single-letter tag used in estimator variant names (R-I, B-F, ...).
  std::string label() const { return kind == WindowKind::rectangular ? "R" : "B"; }

  Dims3 lag_box() const {
    return {2 * widths[0] + 1, 2 * widths[1] + 1, 2 * widths[2] + 1};
  }

  double value(int k1, int k2, int k3) const {
    if (kind == WindowKind::rectangular) return 1.0;
    auto factor = [](int n, int k) { return double(n + 1 - std::abs(k)) / double(n + 1); };
    return factor(widths[0], k1) * factor(widths[1], k2) * factor(widths[2], k3);
  }
};

/// Materialize the window over its lag box Lambda, indexed by k + n.
inline Field3<double> make_window(const WindowSpec& spec) {
  for (int w : spec.widths)
    if (w < 0) throw std::invalid_argument("make_window: widths must be >= 0");
  Field3<double> field(spec.lag_box());
  const auto& n = spec.widths;
  for_each_index(field.dims, [&](int i, int j, int k) {
    field(i, j, k) = spec.value(i - n[0], j - n[1], k - n[2]);
  });
  return field;
}

}  // namespace specfuse
