#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace specfuse {

/// Quantile by linear interpolation between order statistics (type 7):
/// q(p) = x[(n-1)p] with fractional indices interpolated.
inline double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
  double pos = p * double(sorted.size() - 1);
  std::size_t lo = std::size_t(std::floor(pos));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - double(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Five-number summary with the 1.5*IQR whisker convention: whiskers reach
/// the most extreme points not beyond the fences, everything past them is an
/// outlier.
struct BoxplotSummary {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

inline BoxplotSummary boxplot_summary(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("boxplot_summary: empty sample");
  std::sort(values.begin(), values.end());

  BoxplotSummary s;
  s.q25 = quantile(values, 0.25);
  s.median = quantile(values, 0.50);
  s.q75 = quantile(values, 0.75);
  double iqr = s.q75 - s.q25;
  double fence_low = s.q25 - 1.5 * iqr;
  double fence_high = s.q75 + 1.5 * iqr;

  s.whisker_low = s.q75;
  s.whisker_high = s.q25;
  bool any_inlier = false;
  for (double v : values) {
    if (v < fence_low || v > fence_high) {
      s.outliers.push_back(v);
    } else {
      if (!any_inlier) {
        s.whisker_low = s.whisker_high = v;
        any_inlier = true;
      } else {
        s.whisker_low = std::min(s.whisker_low, v);
        s.whisker_high = std::max(s.whisker_high, v);
      }
    }
  }
  return s;
}

}  // namespace specfuse
