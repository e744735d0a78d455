// specfuse command line front end.
//
// Subcommands:
//   synth       scene config -> two-channel measurement cube (CSV)
//   spectrum    scene config -> windowed spectrum estimate, one entry (CSV)
//   estimate    scene config -> peak frequency estimates (JSON)
//   montecarlo  preset/config -> benchmark of all window/estimator variants
//
// Exit codes: 0 success, 2 usage or configuration error, 3 runtime failure.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specfuse/specfuse.hpp"

namespace {

using namespace specfuse;

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string dims_str(const Dims3& d) {
  std::ostringstream os;
  os << d[0] << 'x' << d[1] << 'x' << d[2];
  return os.str();
}

std::string widths_str(const std::array<int, 3>& w) {
  std::ostringstream os;
  os << w[0] << ',' << w[1] << ',' << w[2];
  return os.str();
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_text_file(out_path, text);
}

Dims3 to_dims(const std::vector<int>& v, const char* what) {
  if (v.size() != 3) throw std::invalid_argument(std::string(what) + " needs 3 values");
  return {v[0], v[1], v[2]};
}

std::vector<std::string> scene_comments(const SceneConfig& scene) {
  std::vector<std::string> c;
  c.push_back("dims=" + dims_str(scene.dims) +
              " m_shift=" + format_double(scene.m_shift) +
              " noise_std=" + format_double(scene.noise_std) +
              " seed=" + std::to_string(scene.seed));
  for (const TargetSpec& t : scene.targets)
    c.push_back("target amplitude=" + format_double(t.amplitude) +
                " phase=" + format_double(t.phase) + " theta=" +
                format_double(t.theta[0]) + "," + format_double(t.theta[1]) + "," +
                format_double(t.theta[2]));
  return c;
}

// Shared scene-based options for synth / spectrum / estimate.
struct SceneArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scene JSON file")->required();
    cmd->add_option("--out", out_path, "Output path (default: stdout)");
    seed_opt = cmd->add_option("--seed", seed, "Override the scene noise seed");
  }

  SceneConfig load() const {
    SceneConfig scene = scene_config_from_json(load_json_file(config_path));
    if (seed_opt->count() > 0) scene.seed = seed;
    return scene;
  }
};

struct WindowArgs {
  std::string kind = "rect";
  std::vector<int> widths{8, 8, 2};
  std::vector<int> grid;

  void attach(CLI::App* cmd) {
    cmd->add_option("--window", kind, "Lag window kind")
        ->check(CLI::IsMember({"rect", "rectangular", "bartlett"}));
    cmd->add_option("--widths", widths,
                    "Lag window half-widths n1,n2,n3 (clamped to (N-1)/2)")
        ->delimiter(',')
        ->expected(3);
    cmd->add_option("--grid", grid, "Evaluation grid G1,G2,G3 (default: data dims)")
        ->delimiter(',')
        ->expected(3);
  }

  WindowSpec window_for(const Dims3& dims) const {
    return clamped_window(window_kind_from_string(kind),
                          {widths[0], widths[1], widths[2]}, dims);
  }

  Dims3 grid_for(const Dims3& dims) const {
    return grid.empty() ? dims : to_dims(grid, "--grid");
  }
};

int run_synth(const SceneArgs& args) {
  SceneConfig scene = args.load();
  DataCube cube = scene.synthesize_cube();
  std::ostringstream os;
  write_cube_csv(os, cube, scene_comments(scene));
  emit(args.out_path, os.str());
  return 0;
}

int run_spectrum(const SceneArgs& args, const WindowArgs& wargs,
                 const std::string& entry, bool unwindowed) {
  int row, col;
  if (entry == "11") row = col = 0;
  else if (entry == "22") row = col = 1;
  else if (entry == "12") row = 0, col = 1;
  else throw std::invalid_argument("--entry must be 11, 22 or 12");

  SceneConfig scene = args.load();
  DataCube cube = scene.synthesize_cube();
  std::vector<std::string> comments = scene_comments(scene);

  SpectrumField spec;
  if (unwindowed) {
    spec = periodogram(cube);
    comments.push_back("estimate=periodogram grid=" + dims_str(spec.grid));
  } else {
    WindowSpec win = wargs.window_for(scene.dims);
    Dims3 grid = wargs.grid_for(scene.dims);
    spec = windowed_periodogram(covariances_fft(cube), win, grid);
    comments.push_back("estimate=windowed window=" + to_string(win.kind) +
                       " widths=" + widths_str(win.widths) +
                       " grid=" + dims_str(grid));
  }
  PositivityReport pos = check_positivity(spec);
  comments.push_back("min_eigenvalue=" + format_double(pos.min_eigenvalue) +
                     " nonnegative=" + (pos.nonnegative ? "true" : "false"));
  comments.push_back("entry=" + entry);

  std::ostringstream os;
  write_spectrum_csv(os, spec, row, col, comments);
  emit(args.out_path, os.str());
  return 0;
}

int run_estimate(const SceneArgs& args, const WindowArgs& wargs,
                 const std::string& estimator, int n_peaks,
                 const std::vector<int>& exclusion) {
  SceneConfig scene = args.load();
  DataCube cube = scene.synthesize_cube();
  WindowSpec win = wargs.window_for(scene.dims);
  Dims3 grid = wargs.grid_for(scene.dims);
  SpectrumField spec = windowed_periodogram(covariances_fft(cube), win, grid);

  std::vector<Estimator> kinds;
  if (estimator == "all") kinds = all_estimators();
  else kinds.push_back(estimator_from_string(estimator));

  std::array<int, 3> radii = exclusion.empty()
                                 ? default_exclusion_radii(grid, win.widths)
                                 : std::array<int, 3>{exclusion[0], exclusion[1],
                                                      exclusion[2]};

  nlohmann::json out;
  out["schema"] = peaks_schema;
  out["window"] = window_to_json(win);
  out["grid"] = {grid[0], grid[1], grid[2]};
  out["exclusion"] = {radii[0], radii[1], radii[2]};
  out["estimates"] = nlohmann::json::array();
  for (Estimator kind : kinds) {
    MultiPeakResult peaks =
        multi_peak(make_objective(spec, kind, scene.m_shift), n_peaks, radii);
    nlohmann::json pj = peaks_to_json(peaks);
    pj.erase("schema");
    pj["estimator"] = letter(kind);
    out["estimates"].push_back(pj);
  }
  emit(args.out_path, out.dump(2) + "\n");
  return 0;
}

int run_montecarlo(const std::string& preset, const std::string& config_path,
                   int trials, const CLI::Option* seed_opt, std::uint64_t seed,
                   int threads, const std::string& metric,
                   const std::string& out_dir, bool timing) {
  ExperimentConfig cfg;
  if (!preset.empty())
    cfg = preset_config(preset);
  else if (!config_path.empty())
    cfg = experiment_config_from_json(load_json_file(config_path));
  else
    cfg = preset_config("fig2");
  if (trials > 0) cfg.trials = trials;
  if (seed_opt->count() > 0) cfg.seed = seed;
  if (!metric.empty()) cfg.metric = metric_from_string(metric);
  cfg.validate();

  ExperimentResult res = run_experiment(cfg, threads);

  std::cout << "dims=" << dims_str(cfg.dims) << " trials=" << cfg.trials
            << " noise_std=" << format_double(cfg.noise_std)
            << " seed=" << cfg.seed << " metric=" << to_string(cfg.metric)
            << " threads=" << threads << "\n\n";
  std::printf("%-8s %12s %12s %12s %12s %12s %9s\n", "variant", "median", "q25",
              "q75", "wlow", "whigh", "outliers");
  for (const VariantSummary& v : res.summaries)
    std::printf("%-8s %12s %12s %12s %12s %12s %9zu\n", v.label.c_str(),
                fixed6(v.box.median).c_str(), fixed6(v.box.q25).c_str(),
                fixed6(v.box.q75).c_str(), fixed6(v.box.whisker_low).c_str(),
                fixed6(v.box.whisker_high).c_str(), v.box.outliers.size());
  std::printf("\nwall: %.3f s\n", double(res.wall_micros) * 1e-6);

  if (!out_dir.empty()) {
    write_experiment_outputs(out_dir, cfg, res, timing);
    std::cout << "wrote " << out_dir << "/results.csv and summary.json\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multichannel 3-d spectral estimation and frequency fusion"};
  app.require_subcommand(1);

  // synth ---------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a two-channel measurement cube");
  SceneArgs synth_args;
  synth_args.attach(synth);

  // spectrum ------------------------------------------------------------
  auto* spectrum =
      app.add_subcommand("spectrum", "Windowed spectrum estimate of one matrix entry");
  SceneArgs spectrum_args;
  spectrum_args.attach(spectrum);
  WindowArgs spectrum_win;
  spectrum_win.attach(spectrum);
  std::string entry = "11";
  spectrum->add_option("--entry", entry, "Matrix entry: 11, 22 or 12")
      ->check(CLI::IsMember({"11", "22", "12"}));
  bool unwindowed = false;
  spectrum->add_flag("--unwindowed", unwindowed,
                     "Raw periodogram on the (2N-1)-point grid instead");

  // estimate ------------------------------------------------------------
  auto* estimate = app.add_subcommand("estimate", "Peak frequency estimates");
  SceneArgs estimate_args;
  estimate_args.attach(estimate);
  WindowArgs estimate_win;
  estimate_win.attach(estimate);
  std::string estimator = "all";
  estimate->add_option("--estimator", estimator, "I, S, F or all")
      ->check(CLI::IsMember({"I", "S", "F", "independent", "shifted", "frobenius",
                             "all"}));
  int n_peaks = 1;
  estimate->add_option("--peaks,--targets", n_peaks, "Number of peaks to extract")
      ->check(CLI::PositiveNumber);
  std::vector<int> exclusion;
  estimate
      ->add_option("--exclusion", exclusion,
                   "Per-axis suppression radius in cells (default: window lobe)")
      ->delimiter(',')
      ->expected(3);

  // montecarlo ----------------------------------------------------------
  auto* mc = app.add_subcommand("montecarlo", "Benchmark estimator variants");
  std::string preset, mc_config, metric, out_dir;
  int trials = 0, threads = 1;
  std::uint64_t mc_seed = 0;
  bool timing = false;
  auto* preset_opt =
      mc->add_option("--preset", preset, "Bundled experiment preset")
          ->check(CLI::IsMember(preset_names()));
  auto* mc_config_opt = mc->add_option("--config", mc_config, "Experiment JSON file");
  preset_opt->excludes(mc_config_opt);
  mc->add_option("--trials", trials, "Override trial count")->check(CLI::PositiveNumber);
  auto* mc_seed_opt = mc->add_option("--seed", mc_seed, "Override base seed");
  mc->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  mc->add_option("--metric", metric, "Error metric")
      ->check(CLI::IsMember({"wrapped", "euclidean"}));
  mc->add_option("--out", out_dir, "Directory for results.csv and summary.json");
  mc->add_flag("--timing", timing,
               "Record per-trial wall time in results.csv (breaks byte-for-byte "
               "reproducibility of that column)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(synth)) return run_synth(synth_args);
    if (app.got_subcommand(spectrum))
      return run_spectrum(spectrum_args, spectrum_win, entry, unwindowed);
    if (app.got_subcommand(estimate))
      return run_estimate(estimate_args, estimate_win, estimator, n_peaks, exclusion);
    return run_montecarlo(preset, mc_config, trials, mc_seed_opt, mc_seed, threads,
                          metric, out_dir, timing);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
