#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "specfuse/grid.hpp"
#include "specfuse/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "specfuse_cli_test";

int run_cli(const std::string& args, const fs::path& stdout_file = {}) {
  std::string cmd = std::string(SPECFUSE_CLI_PATH) + " " + args;
  if (stdout_file.empty())
    cmd += " >/dev/null 2>&1";
  else
    cmd += " > " + stdout_file.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_scene(const std::string& name, const json& extra = json::object()) {
  json scene;
  scene["schema"] = "specfuse-scene/1";
  scene["dims"] = {8, 8, 4};
  scene["m_shift"] = 20.0;
  scene["noise_std"] = 0.0;
  scene["seed"] = 5;
  scene["targets"] = {{{"amplitude", 1.0},
                       {"phase", 0.4},
                       {"theta",
                        {specfuse::grid_omega(8, 6), specfuse::grid_omega(8, 2),
                         specfuse::grid_omega(4, 3)}}}};
  for (auto& [k, v] : extra.items()) scene[k] = v;
  fs::path p = kWork / name;
  std::ofstream(p) << scene.dump(2);
  return p;
}

fs::path write_experiment(const std::string& name) {
  json cfg;
  cfg["schema"] = "specfuse-experiment/1";
  cfg["dims"] = {12, 12, 3};
  cfg["trials"] = 3;
  cfg["noise_std"] = 20.0;
  cfg["windows"] = {{{"kind", "rectangular"}, {"widths", {2, 2, 1}}},
                    {{"kind", "bartlett"}, {"widths", {3, 3, 1}}}};
  cfg["seed"] = 77;
  fs::path p = kWork / name;
  std::ofstream(p) << cfg.dump(2);
  return p;
}

struct WorkDir {
  WorkDir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

WorkDir work_dir_guard;

}  // namespace

TEST_CASE("synth writes deterministic cubes") {
  fs::path scene = write_scene("scene_synth.json", {{"noise_std", 20.0}});
  fs::path out1 = kWork / "cube1.csv", out2 = kWork / "cube2.csv";
  REQUIRE(run_cli("synth --config " + scene.string() + " --out " + out1.string()) ==
          0);
  REQUIRE(run_cli("synth --config " + scene.string() + " --out " + out2.string()) ==
          0);
  std::string a = slurp(out1);
  CHECK(a == slurp(out2));
  CHECK(a.rfind("# dims=8x8x4", 0) == 0);
  CHECK(a.find("channel,t1,t2,t3,re,im") != std::string::npos);

  // A different seed must change the samples.
  fs::path out3 = kWork / "cube3.csv";
  REQUIRE(run_cli("synth --config " + scene.string() + " --seed 6 --out " +
                  out3.string()) == 0);
  CHECK(a != slurp(out3));
}

TEST_CASE("estimate recovers an on-grid target with every estimator") {
  fs::path scene = write_scene("scene_est.json");
  fs::path out = kWork / "peaks.json";
  REQUIRE(run_cli("estimate --config " + scene.string() + " --estimator all --out " +
                  out.string()) == 0);
  json res = json::parse(slurp(out));
  CHECK(res.at("schema") == "specfuse-peaks/1");
  REQUIRE(res.at("estimates").size() == 3);
  for (const auto& est : res.at("estimates")) {
    REQUIRE(est.at("peaks").size() == 1);
    auto th = est.at("peaks")[0].at("theta_hat");
    CHECK(th[0].get<double>() == Catch::Approx(specfuse::grid_omega(8, 6)));
    CHECK(th[1].get<double>() == Catch::Approx(specfuse::grid_omega(8, 2)));
    CHECK(th[2].get<double>() == Catch::Approx(specfuse::grid_omega(4, 3)));
  }
}

TEST_CASE("estimate separates two targets with --targets 2") {
  json extra;
  extra["targets"] = {{{"amplitude", 1.0},
                       {"phase", 0.0},
                       {"theta",
                        {specfuse::grid_omega(8, 1), specfuse::grid_omega(8, 2),
                         specfuse::grid_omega(4, 0)}}},
                      {{"amplitude", 1.0},
                       {"phase", 1.0},
                       {"theta",
                        {specfuse::grid_omega(8, 5), specfuse::grid_omega(8, 6),
                         specfuse::grid_omega(4, 2)}}}};
  fs::path scene = write_scene("scene_two.json", extra);
  fs::path out = kWork / "peaks2.json";
  REQUIRE(run_cli("estimate --config " + scene.string() +
                  " --estimator F --targets 2 --exclusion 2,2,1 --out " +
                  out.string()) == 0);
  json res = json::parse(slurp(out));
  REQUIRE(res.at("estimates").size() == 1);
  auto peaks = res.at("estimates")[0].at("peaks");
  REQUIRE(peaks.size() == 2);
  std::vector<std::vector<int>> got;
  for (const auto& p : peaks) got.push_back(p.at("grid_index").get<std::vector<int>>());
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<std::vector<int>>{{1, 2, 0}, {5, 6, 2}});
}

TEST_CASE("spectrum dump peaks at the target bin and reports positivity") {
  fs::path scene = write_scene("scene_spec.json");
  fs::path out = kWork / "spec.csv";
  REQUIRE(run_cli("spectrum --config " + scene.string() + " --entry 11 --out " +
                  out.string()) == 0);
  std::string text = slurp(out);
  CHECK(text.find("# min_eigenvalue=") != std::string::npos);

  // Find the row with the largest magnitude column.
  std::istringstream lines(text);
  std::string line;
  double best_mag = -1;
  std::array<int, 3> best{};
  bool header_seen = false;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      CHECK(line == "g1,g2,g3,omega1,omega2,omega3,re,im,mag,phase");
      continue;
    }
    std::array<std::string, 10> cols;
    std::istringstream row(line);
    for (auto& c : cols) REQUIRE(std::getline(row, c, ','));
    double mag = std::stod(cols[8]);
    if (mag > best_mag) {
      best_mag = mag;
      best = {std::stoi(cols[0]), std::stoi(cols[1]), std::stoi(cols[2])};
    }
  }
  CHECK(best == std::array<int, 3>{6, 2, 3});
}

TEST_CASE("unwindowed spectrum of pure noise stays positive") {
  // The scene schema wants at least one target; a zero-amplitude target
  // expresses a pure-noise scene.
  json extra;
  extra["noise_std"] = 20.0;
  extra["targets"] = {
      {{"amplitude", 0.0}, {"phase", 0.0}, {"theta", {0.0, 0.0, 0.0}}}};
  fs::path scene = write_scene("scene_noise.json", extra);
  fs::path out = kWork / "noise_spec.csv";
  REQUIRE(run_cli("spectrum --config " + scene.string() + " --unwindowed --out " +
                  out.string()) == 0);
  CHECK(slurp(out).find("nonnegative=true") != std::string::npos);
}

TEST_CASE("montecarlo artifacts are deterministic") {
  fs::path cfg = write_experiment("exp.json");
  fs::path d1 = kWork / "mc1", d2 = kWork / "mc2", d3 = kWork / "mc3";
  std::string base = "montecarlo --config " + cfg.string() + " --trials 2 --seed 7";
  REQUIRE(run_cli(base + " --out " + d1.string()) == 0);
  REQUIRE(run_cli(base + " --out " + d2.string()) == 0);
  REQUIRE(run_cli(base + " --threads 8 --out " + d3.string()) == 0);
  std::string csv = slurp(d1 / "results.csv");
  CHECK(csv == slurp(d2 / "results.csv"));
  CHECK(csv == slurp(d3 / "results.csv"));
  CHECK(csv.rfind("trial,window,estimator,", 0) == 0);

  json summary = json::parse(slurp(d1 / "summary.json"));
  CHECK(summary.at("schema") == "specfuse-summary/1");
  CHECK(summary.at("config").at("trials") == 2);
  CHECK(summary.at("config").at("seed") == 7);
  CHECK(summary.at("variants").size() == 6);
}

TEST_CASE("montecarlo preset run prints the variant table") {
  fs::path stdout_file = kWork / "mc_stdout.txt";
  fs::path out = kWork / "mc_preset";
  REQUIRE(run_cli("montecarlo --preset fig2 --trials 2 --out " + out.string(),
                  stdout_file) == 0);
  std::string text = slurp(stdout_file);
  CHECK(text.find("variant") != std::string::npos);
  for (const char* label : {"R-I", "R-S", "R-F", "B-I", "B-S", "B-F"})
    CHECK(text.find(label) != std::string::npos);
  json summary = json::parse(slurp(out / "summary.json"));
  CHECK(summary.at("config").at("dims") == json({40, 40, 7}));
}

TEST_CASE("configuration errors exit with code 2 and write nothing") {
  fs::path out = kWork / "never";
  CHECK(run_cli("montecarlo --config " + (kWork / "missing.json").string() +
                " --out " + out.string()) == 2);
  CHECK_FALSE(fs::exists(out));

  fs::path broken = kWork / "broken.json";
  std::ofstream(broken) << "{ not json";
  CHECK(run_cli("montecarlo --config " + broken.string() + " --out " +
                out.string()) == 2);
  CHECK_FALSE(fs::exists(out));

  // Scene violating the schema: empty target list.
  fs::path empty_targets = kWork / "empty_targets.json";
  std::ofstream(empty_targets)
      << R"({"schema":"specfuse-scene/1","dims":[4,4,2],"targets":[]})";
  CHECK(run_cli("synth --config " + empty_targets.string()) == 2);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("transmogrify") == 2);
  CHECK(run_cli("spectrum") == 2);  // --config is required
  fs::path scene = write_scene("scene_usage.json");
  CHECK(run_cli("spectrum --config " + scene.string() + " --entry 21") == 2);
  CHECK(run_cli("montecarlo --preset fig9") == 2);
  CHECK(run_cli("montecarlo --preset fig2 --config " + scene.string()) == 2);
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("montecarlo --help") == 0);
}
