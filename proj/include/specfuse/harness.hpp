#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "specfuse/boxplot.hpp"
#include "specfuse/covariance.hpp"
#include "specfuse/estimators.hpp"
#include "specfuse/rng.hpp"
#include "specfuse/signal_model.hpp"
#include "specfuse/spectrum.hpp"
#include "specfuse/window.hpp"

namespace specfuse {

/// Error norms on the frequency torus. "wrapped" folds each component
/// difference into (-pi, pi] before the Euclidean norm, so a true theta near
/// pi estimated near -pi does not record a spurious ~2*pi miss. "euclidean"
/// is the plain norm of canonical representatives.
enum class ErrorMetric { wrapped, euclidean };

inline std::string to_string(ErrorMetric m) {
  return m == ErrorMetric::wrapped ? "wrapped" : "euclidean";
}

inline ErrorMetric metric_from_string(const std::string& s) {
  if (s == "wrapped") return ErrorMetric::wrapped;
  if (s == "euclidean") return ErrorMetric::euclidean;
  throw std::invalid_argument("unknown error metric: " + s);
}

inline double error_norm(const FrequencyVector& est, const FrequencyVector& truth,
                         ErrorMetric metric) {
  double acc = 0;
  for (int j = 0; j < 3; ++j) {
    double d = metric == ErrorMetric::wrapped ? angle_diff(est[j], truth[j])
                                              : est[j] - truth[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// Full Monte Carlo configuration: one single-target scene per trial, all
/// requested (window, estimator) variants evaluated on the same cube.
struct ExperimentConfig {
  Dims3 dims{40, 40, 7};
  int trials = 200;
  double amplitude = 1.0;
  double noise_std = 20.0;
  double m_shift = 20.0;  // M = d / delta_s
  std::vector<WindowSpec> windows;
  std::vector<Estimator> estimators;
  std::uint64_t seed = 1;
  ErrorMetric metric = ErrorMetric::wrapped;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (amplitude < 0) throw std::invalid_argument("config: amplitude must be >= 0");
    if (noise_std < 0) throw std::invalid_argument("config: noise_std must be >= 0");
    for (int j = 0; j < 3; ++j)
      if (dims[j] < 1) throw std::invalid_argument("config: dims must be >= 1");
    if (windows.empty()) throw std::invalid_argument("config: no windows");
    if (estimators.empty()) throw std::invalid_argument("config: no estimators");
    for (const WindowSpec& w : windows)
      for (int j = 0; j < 3; ++j) {
        if (w.widths[j] < 0) throw std::invalid_argument("config: negative window width");
        if (2 * w.widths[j] + 1 > dims[j])
          throw std::invalid_argument("config: window " + w.label() + " axis " +
                                      std::to_string(j + 1) +
                                      " violates 2n+1 <= N");
      }
  }

  /// Per-window tags in config order; a repeated window kind gets an ordinal
  /// suffix (R, B, R2, ...).
  std::vector<std::string> window_tags() const {
    std::vector<std::string> tags;
    for (std::size_t wi = 0; wi < windows.size(); ++wi) {
      std::string tag = windows[wi].label();
      int repeat = 1;
      for (std::size_t prev = 0; prev < wi; ++prev)
        if (windows[prev].label() == windows[wi].label()) ++repeat;
      if (repeat > 1) tag += std::to_string(repeat);
      tags.push_back(tag);
    }
    return tags;
  }

  /// Variant labels in evaluation order, e.g. R-I, R-S, R-F, B-I, B-S, B-F.
  std::vector<std::string> variant_labels() const {
    std::vector<std::string> labels;
    for (const std::string& tag : window_tags())
      for (Estimator e : estimators) labels.push_back(tag + "-" + letter(e));
    return labels;
  }
};

struct VariantResult {
  FrequencyVector theta_hat;
  double error = 0.0;
};

struct TrialRecord {
  int index = 0;
  FrequencyVector theta;                // true target frequency of the trial
  std::vector<VariantResult> results;   // one per variant, config order
  std::int64_t micros = 0;              // wall-clock of the trial pipeline
};

/// One trial on a caller-supplied scene (the test hook for on-grid targets);
/// noise still comes from the trial substream.
inline TrialRecord run_trial_with_scene(const ExperimentConfig& cfg, int index,
                                        const std::vector<TargetSpec>& scene) {
  auto start = std::chrono::steady_clock::now();
  std::uint64_t trial_seed = derive_stream(cfg.seed, std::uint64_t(index));

  DataCube cube = synthesize(scene, cfg.dims, cfg.m_shift, cfg.noise_std,
                             derive_stream(trial_seed, 1));
  CovarianceField cov = covariances_fft(cube);

  TrialRecord record;
  record.index = index;
  record.theta = scene.front().theta;
  for (const WindowSpec& win : cfg.windows) {
    SpectrumField spec = windowed_periodogram(cov, win, cfg.dims);
    for (Estimator est : cfg.estimators) {
      PeakEstimate peak = peak_search(make_objective(spec, est, cfg.m_shift));
      record.results.push_back(
          {peak.theta_hat, error_norm(peak.theta_hat, record.theta, cfg.metric)});
    }
  }
  record.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return record;
}

/// One trial of the protocol: draw a fresh target (frequencies and phase
/// uniform on [-pi, pi)), synthesize, estimate with every variant. The RNG
/// substream depends only on (config seed, trial index).
inline TrialRecord run_trial(const ExperimentConfig& cfg, int index) {
  std::uint64_t trial_seed = derive_stream(cfg.seed, std::uint64_t(index));
  std::vector<TargetSpec> scene =
      draw_random_scene(1, cfg.amplitude, derive_stream(trial_seed, 0));
  return run_trial_with_scene(cfg, index, scene);
}

struct VariantSummary {
  std::string label;
  BoxplotSummary box;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;       // ordered by trial index
  std::vector<VariantSummary> summaries;  // one per variant, config order
  std::int64_t wall_micros = 0;
};

/// Run all trials, optionally on a worker pool. Trials are independent and
/// their substreams are derived from the trial index, so the result is
/// identical for any worker count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 1) {
  cfg.validate();
  if (threads < 1) threads = 1;
  auto start = std::chrono::steady_clock::now();

  ExperimentResult result;
  result.records.resize(cfg.trials);
  if (threads == 1) {
    for (int i = 0; i < cfg.trials; ++i) result.records[i] = run_trial(cfg, i);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int i = next.fetch_add(1); i < cfg.trials; i = next.fetch_add(1))
        result.records[i] = run_trial(cfg, i);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<std::string> labels = cfg.variant_labels();
  for (std::size_t v = 0; v < labels.size(); ++v) {
    std::vector<double> errors;
    errors.reserve(result.records.size());
    for (const TrialRecord& r : result.records) errors.push_back(r.results[v].error);
    result.summaries.push_back({labels[v], boxplot_summary(std::move(errors))});
  }
  result.wall_micros = std::chrono::duration_cast<std::chrono::microseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return result;
}

}  // namespace specfuse
