#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "specfuse/grid.hpp"
#include "specfuse/signal_model.hpp"
#include "specfuse/spectrum.hpp"

namespace specfuse {

/// The three spectral-fusion objectives. "independent" merges the two
/// auto-spectra, "shifted" adds a phase-compensated cross term, "frobenius"
/// uses the squared Frobenius norm of the whole matrix.
enum class Estimator { independent, shifted, frobenius };

inline std::string letter(Estimator e) {
  switch (e) {
    case Estimator::independent: return "I";
    case Estimator::shifted: return "S";
    default: return "F";
  }
}

inline Estimator estimator_from_string(const std::string& s) {
  if (s == "I" || s == "independent") return Estimator::independent;
  if (s == "S" || s == "shifted") return Estimator::shifted;
  if (s == "F" || s == "frobenius") return Estimator::frobenius;
  throw std::invalid_argument("unknown estimator: " + s);
}

/// Real nonnegative objective values over a spectrum grid.
struct ObjectiveField {
  Dims3 grid{};
  std::vector<double> values;
  Estimator tag = Estimator::independent;

  double at(int g1, int g2, int g3) const { return values[flat_index(grid, g1, g2, g3)]; }
  double omega(int axis, int g) const { return grid_omega(grid[axis], g); }
};

/// |Phi_11|^2 + |Phi_22|^2; ignores the cross-spectrum.
inline ObjectiveField objective_independent(const SpectrumField& spec) {
  ObjectiveField obj{spec.grid, std::vector<double>(count(spec.grid)),
                     Estimator::independent};
  for (std::int64_t f = 0; f < count(spec.grid); ++f)
    obj.values[f] =
        std::norm(spec.values.planes[0][f]) + std::norm(spec.values.planes[3][f]);
  return obj;
}

/// |Phi_11|^2 + 2 [Re(exp(i M w3) Phi_12)]^2 + |Phi_22|^2. The weight undoes
/// the inter-ULA phase lag exactly when w3 equals the true theta3.
inline ObjectiveField objective_shifted(const SpectrumField& spec, double m_shift) {
  ObjectiveField obj{spec.grid, std::vector<double>(count(spec.grid)),
                     Estimator::shifted};
  std::vector<cdouble> comp(spec.grid[2]);
  for (int g3 = 0; g3 < spec.grid[2]; ++g3)
    comp[g3] = std::polar(1.0, m_shift * spec.omega(2, g3));
  for_each_index(spec.grid, [&](int g1, int g2, int g3) {
    std::int64_t f = flat_index(spec.grid, g1, g2, g3);
    double cross = (comp[g3] * spec.values.planes[1][f]).real();
    obj.values[f] = std::norm(spec.values.planes[0][f]) + 2.0 * cross * cross +
                    std::norm(spec.values.planes[3][f]);
  });
  return obj;
}

/// Squared Frobenius norm |Phi_11|^2 + |Phi_22|^2 + 2 |Phi_12|^2; uses the
/// cross-spectrum magnitude and discards its phase.
inline ObjectiveField objective_frobenius(const SpectrumField& spec) {
  ObjectiveField obj{spec.grid, std::vector<double>(count(spec.grid)),
                     Estimator::frobenius};
  for (std::int64_t f = 0; f < count(spec.grid); ++f)
    obj.values[f] = std::norm(spec.values.planes[0][f]) +
                    2.0 * std::norm(spec.values.planes[1][f]) +
                    std::norm(spec.values.planes[3][f]);
  return obj;
}

inline ObjectiveField make_objective(const SpectrumField& spec, Estimator e,
                                     double m_shift) {
  switch (e) {
    case Estimator::independent: return objective_independent(spec);
    case Estimator::shifted: return objective_shifted(spec, m_shift);
    default: return objective_frobenius(spec);
  }
}

struct PeakEstimate {
  FrequencyVector theta_hat;
  std::array<int, 3> grid_index{};
  double value = 0.0;
  Estimator tag = Estimator::independent;
};

/// Global argmax over the grid. Ties go to the lexicographically smallest
/// grid index (the row-major scan keeps only strictly larger values).
inline PeakEstimate peak_search(const ObjectiveField& obj) {
  if (obj.values.empty()) throw std::invalid_argument("peak_search: empty field");
  std::int64_t best = 0;
  for (std::int64_t f = 1; f < std::int64_t(obj.values.size()); ++f)
    if (obj.values[f] > obj.values[best]) best = f;
  int g3 = int(best % obj.grid[2]);
  int g2 = int((best / obj.grid[2]) % obj.grid[1]);
  int g1 = int(best / (std::int64_t(obj.grid[1]) * obj.grid[2]));
  PeakEstimate peak;
  peak.grid_index = {g1, g2, g3};
  peak.theta_hat =
      FrequencyVector(obj.omega(0, g1), obj.omega(1, g2), obj.omega(2, g3));
  peak.value = obj.at(g1, g2, g3);
  peak.tag = obj.tag;
  return peak;
}

struct MultiPeakResult {
  std::vector<PeakEstimate> peaks;  // descending objective order
  bool exhausted = false;           // grid ran out before n peaks
};

/// Approximate main-lobe half-width of the window on a size-G grid, used as
/// the default suppression radius around an accepted peak.
inline std::array<int, 3> default_exclusion_radii(const Dims3& grid,
                                                  const std::array<int, 3>& widths) {
  std::array<int, 3> r{};
  for (int j = 0; j < 3; ++j)
    r[j] = std::max(1, (grid[j] + 2 * (widths[j] + 1) - 1) / (2 * (widths[j] + 1)));
  return r;
}

/// Greedy multi-target search: take the argmax, blank a toroidal box of the
/// given per-axis cell radius around it, repeat.
inline MultiPeakResult multi_peak(const ObjectiveField& obj, int n_peaks,
                                  const std::array<int, 3>& exclusion) {
  if (n_peaks < 1) throw std::invalid_argument("multi_peak: n_peaks must be >= 1");
  for (int r : exclusion)
    if (r < 1) throw std::invalid_argument("multi_peak: exclusion radii must be >= 1");

  ObjectiveField work = obj;
  const double blank = -std::numeric_limits<double>::infinity();
  MultiPeakResult result;
  for (int p = 0; p < n_peaks; ++p) {
    PeakEstimate peak = peak_search(work);
    if (peak.value == blank) {
      result.exhausted = true;
      break;
    }
    result.peaks.push_back(peak);
    for (int d1 = -exclusion[0]; d1 <= exclusion[0]; ++d1)
      for (int d2 = -exclusion[1]; d2 <= exclusion[1]; ++d2)
        for (int d3 = -exclusion[2]; d3 <= exclusion[2]; ++d3) {
          int g1 = (peak.grid_index[0] + d1 % work.grid[0] + work.grid[0]) % work.grid[0];
          int g2 = (peak.grid_index[1] + d2 % work.grid[1] + work.grid[1]) % work.grid[1];
          int g3 = (peak.grid_index[2] + d3 % work.grid[2] + work.grid[2]) % work.grid[2];
          work.values[flat_index(work.grid, g1, g2, g3)] = blank;
        }
  }
  return result;
}

}  // namespace specfuse
