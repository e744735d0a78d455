#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "specfuse/harness.hpp"

using namespace specfuse;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.dims = {16, 16, 4};
  cfg.trials = 12;
  cfg.amplitude = 1.0;
  cfg.noise_std = 20.0;
  cfg.m_shift = 20.0;
  cfg.windows = {{WindowKind::rectangular, {3, 3, 1}},
                 {WindowKind::bartlett, {4, 4, 1}}};
  cfg.estimators = {Estimator::independent, Estimator::shifted,
                    Estimator::frobenius};
  cfg.seed = 99;
  cfg.metric = ErrorMetric::wrapped;
  return cfg;
}

bool same_results(const TrialRecord& a, const TrialRecord& b) {
  if (a.index != b.index || a.results.size() != b.results.size()) return false;
  for (int j = 0; j < 3; ++j)
    if (a.theta[j] != b.theta[j]) return false;
  for (std::size_t v = 0; v < a.results.size(); ++v) {
    if (a.results[v].error != b.results[v].error) return false;
    for (int j = 0; j < 3; ++j)
      if (a.results[v].theta_hat[j] != b.results[v].theta_hat[j]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("error metrics") {
  SECTION("wrapped metric folds across the seam") {
    FrequencyVector est(pi - 0.1, 0, 0);
    FrequencyVector truth(-pi + 0.1, 0, 0);
    CHECK(error_norm(est, truth, ErrorMetric::wrapped) == Catch::Approx(0.2));
    CHECK(error_norm(est, truth, ErrorMetric::euclidean) ==
          Catch::Approx(2 * pi - 0.2));
  }

  SECTION("agreement away from the seam") {
    FrequencyVector est(0.4, -0.2, 1.0);
    FrequencyVector truth(0.1, 0.2, 0.5);
    double want = std::sqrt(0.3 * 0.3 + 0.4 * 0.4 + 0.5 * 0.5);
    CHECK(error_norm(est, truth, ErrorMetric::wrapped) == Catch::Approx(want));
    CHECK(error_norm(est, truth, ErrorMetric::euclidean) == Catch::Approx(want));
  }

  SECTION("string round trip") {
    CHECK(metric_from_string(to_string(ErrorMetric::wrapped)) ==
          ErrorMetric::wrapped);
    CHECK(metric_from_string(to_string(ErrorMetric::euclidean)) ==
          ErrorMetric::euclidean);
    CHECK_THROWS_AS(metric_from_string("manhattan"), std::invalid_argument);
  }
}

TEST_CASE("config validation and labels") {
  ExperimentConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());

  SECTION("variant labels follow window-major order") {
    CHECK(cfg.variant_labels() ==
          std::vector<std::string>{"R-I", "R-S", "R-F", "B-I", "B-S", "B-F"});
    CHECK(cfg.window_tags() == std::vector<std::string>{"R", "B"});
  }

  SECTION("duplicate window kinds get ordinal tags") {
    cfg.windows = {{WindowKind::rectangular, {3, 3, 1}},
                   {WindowKind::rectangular, {5, 5, 1}}};
    cfg.estimators = {Estimator::frobenius};
    CHECK(cfg.variant_labels() == std::vector<std::string>{"R-F", "R2-F"});
  }

  SECTION("invalid configs are rejected") {
    ExperimentConfig bad = cfg;
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.windows.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.estimators.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.windows[0].widths = {8, 3, 1};  // 2*8+1 = 17 > 16
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.noise_std = -1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}

TEST_CASE("single trials") {
  ExperimentConfig cfg = small_config();

  SECTION("same config and index give identical records") {
    TrialRecord a = run_trial(cfg, 5);
    TrialRecord b = run_trial(cfg, 5);
    TrialRecord c = run_trial(cfg, 6);
    CHECK(same_results(a, b));
    CHECK_FALSE(same_results(a, c));
    REQUIRE(a.results.size() == 6);
  }

  SECTION("noiseless on-grid target gives zero error for all variants") {
    cfg.noise_std = 0.0;
    FrequencyVector theta(grid_omega(16, 11), grid_omega(16, 3), grid_omega(4, 2));
    std::vector<TargetSpec> scene{{1.0, 0.7, theta}};
    TrialRecord rec = run_trial_with_scene(cfg, 0, scene);
    for (const VariantResult& r : rec.results) CHECK(r.error == 0.0);
  }

  SECTION("noiseless off-grid error obeys the quantization bound") {
    cfg.noise_std = 0.0;
    cfg.estimators = {Estimator::independent, Estimator::frobenius};
    // Half a cell per axis, wrapped metric.
    const double half_cell =
        pi * std::sqrt(1.0 / (16.0 * 16) + 1.0 / (16.0 * 16) + 1.0 / (4.0 * 4));
    for (std::uint64_t s : {11u, 22u, 33u, 44u}) {
      std::vector<TargetSpec> scene = draw_random_scene(1, 1.0, s);
      TrialRecord rec = run_trial_with_scene(cfg, 0, scene);
      for (const VariantResult& r : rec.results)
        CHECK(r.error <= half_cell + 1e-12);
    }
  }

  SECTION("shifted estimator stays within a relaxed quantization bound") {
    // The phase-compensation factor cos^2(M * delta3) can prefer the
    // second-nearest cell along the third axis when the target sits near a
    // cell edge, so the S variant is only guaranteed 1.5 cells there.
    cfg.noise_std = 0.0;
    cfg.estimators = {Estimator::shifted};
    const double relaxed =
        pi * std::sqrt(1.0 / (16.0 * 16) + 1.0 / (16.0 * 16) + 9.0 / (4.0 * 4));
    for (std::uint64_t s : {11u, 22u, 33u, 44u, 55u, 66u}) {
      std::vector<TargetSpec> scene = draw_random_scene(1, 1.0, s);
      TrialRecord rec = run_trial_with_scene(cfg, 0, scene);
      for (const VariantResult& r : rec.results)
        CHECK(r.error <= relaxed + 1e-12);
    }
  }
}

TEST_CASE("experiment aggregation") {
  ExperimentConfig cfg = small_config();

  SECTION("single-trial summary echoes the trial error") {
    cfg.trials = 1;
    ExperimentResult res = run_experiment(cfg);
    REQUIRE(res.records.size() == 1);
    REQUIRE(res.summaries.size() == 6);
    for (std::size_t v = 0; v < 6; ++v) {
      CHECK(res.summaries[v].box.median == res.records[0].results[v].error);
      CHECK(res.summaries[v].box.outliers.empty());
    }
  }

  SECTION("parallel execution reproduces the serial run") {
    ExperimentResult serial = run_experiment(cfg, 1);
    ExperimentResult parallel = run_experiment(cfg, 8);
    REQUIRE(serial.records.size() == parallel.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i)
      CHECK(same_results(serial.records[i], parallel.records[i]));
  }

  SECTION("summaries aggregate the per-variant error columns") {
    ExperimentResult res = run_experiment(cfg, 4);
    std::vector<std::string> labels = cfg.variant_labels();
    for (std::size_t v = 0; v < labels.size(); ++v) {
      CHECK(res.summaries[v].label == labels[v]);
      std::vector<double> column;
      for (const TrialRecord& r : res.records) column.push_back(r.results[v].error);
      BoxplotSummary want = boxplot_summary(column);
      CHECK(res.summaries[v].box.median == want.median);
      CHECK(res.summaries[v].box.q25 == want.q25);
      CHECK(res.summaries[v].box.q75 == want.q75);
    }
  }

  SECTION("wrapped errors are bounded by pi*sqrt(3)") {
    ExperimentResult res = run_experiment(cfg, 2);
    for (const TrialRecord& r : res.records)
      for (const VariantResult& v : r.results) {
        CHECK(v.error >= 0.0);
        CHECK(v.error <= pi * std::sqrt(3.0) + 1e-12);
      }
  }

  SECTION("removing the noise can only improve the medians") {
    cfg.trials = 20;
    ExperimentResult noisy = run_experiment(cfg, 4);
    ExperimentConfig clean_cfg = cfg;
    clean_cfg.noise_std = 0.0;
    ExperimentResult clean = run_experiment(clean_cfg, 4);
    for (std::size_t v = 0; v < noisy.summaries.size(); ++v)
      CHECK(clean.summaries[v].box.median <= noisy.summaries[v].box.median);
  }
}

TEST_CASE("boxplot statistics") {
  SECTION("constant sample") {
    BoxplotSummary b = boxplot_summary({1, 1, 1, 1});
    CHECK(b.median == 1.0);
    CHECK(b.q25 == 1.0);
    CHECK(b.q75 == 1.0);
    CHECK(b.whisker_low == 1.0);
    CHECK(b.whisker_high == 1.0);
    CHECK(b.outliers.empty());
  }

  SECTION("type-7 interpolated quartiles") {
    BoxplotSummary b = boxplot_summary({4, 1, 3, 2});  // order must not matter
    CHECK(b.q25 == Catch::Approx(1.75));
    CHECK(b.median == Catch::Approx(2.5));
    CHECK(b.q75 == Catch::Approx(3.25));
  }

  SECTION("an extreme point becomes an outlier") {
    BoxplotSummary b = boxplot_summary({0, 1, 2, 3, 100});
    CHECK(b.median == 2.0);
    CHECK(b.q25 == 1.0);
    CHECK(b.q75 == 3.0);
    REQUIRE(b.outliers == std::vector<double>{100.0});
    CHECK(b.whisker_high == 3.0);
    CHECK(b.whisker_low == 0.0);
  }

  SECTION("whiskers are the most extreme inliers") {
    BoxplotSummary b = boxplot_summary({0, 10, 11, 12, 13, 14, 40});
    CHECK(b.q25 == Catch::Approx(10.5));
    CHECK(b.q75 == Catch::Approx(13.5));
    CHECK(b.whisker_low == 10.0);
    CHECK(b.whisker_high == 14.0);
    CHECK(b.outliers == std::vector<double>{0.0, 40.0});
  }

  SECTION("singleton and empty") {
    BoxplotSummary b = boxplot_summary({5});
    CHECK(b.median == 5.0);
    CHECK(b.q25 == 5.0);
    CHECK(b.q75 == 5.0);
    CHECK(b.whisker_low == 5.0);
    CHECK(b.whisker_high == 5.0);
    CHECK_THROWS_AS(boxplot_summary({}), std::invalid_argument);
  }
}
