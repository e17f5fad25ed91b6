#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "roughflow/io.hpp"

namespace fs = std::filesystem;

namespace {

// Binary location is injected by the build so the test works from any cwd.
const std::string kCli = ROUGHFLOW_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / fs::path("roughflow_cli_test")) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  f << body;
}

}  // namespace

TEST_CASE("help and missing arguments") {
  CHECK(run("--help") == 0);
  CHECK(run("solve") == 2);            // --config required
  CHECK(run("frobnicate --x") == 2);   // unknown subcommand
}

TEST_CASE("solve writes per-run artifacts and succeeds") {
  TempDir dir;
  write(dir.file("cfg.json"), R"({
    "driver": {"type": "fbm", "dimension": 2, "hurst": 0.5, "samples": 32},
    "sigma": {"preset": "sin_rotation"},
    "drift": {"preset": "cubic_inward"},
    "initial_conditions": [[0.5, 0.0]],
    "seeds": [3, 4]
  })");
  CHECK(run("solve --config " + dir.file("cfg.json") + " --out " + dir.path.string()) ==
        0);
  CHECK(fs::exists(dir.file("run_seed3_xi0.csv")));
  CHECK(fs::exists(dir.file("run_seed3_xi0.json")));
  CHECK(fs::exists(dir.file("run_seed4_xi0.csv")));
  auto traj = roughflow::read_trajectory_csv(dir.file("run_seed3_xi0.csv"));
  CHECK(traj.times.size() == 33);
  CHECK(traj.values.front().size() == 2);
}

TEST_CASE("config errors exit with the dedicated code") {
  TempDir dir;
  write(dir.file("bad.json"), R"({"driver": {"type": "fbm", "hurst": 2.0}})");
  CHECK(run("solve --config " + dir.file("bad.json")) == 2);
  CHECK(run("solve --config " + dir.file("missing.json")) == 2);
  write(dir.file("notjson.json"), "{{{");
  CHECK(run("solve --config " + dir.file("notjson.json")) == 2);
}

TEST_CASE("lift round trips a points file") {
  TempDir dir;
  write(dir.file("pts.csv"),
        "t,x_1,x_2\n0,0,0\n0.5,1,0\n1,1,1\n");
  CHECK(run("lift --in " + dir.file("pts.csv") + " --out " + dir.path.string()) == 0);
  REQUIRE(fs::exists(dir.file("lift.csv")));
  auto x = roughflow::read_lift_csv(dir.file("lift.csv"));
  CHECK(x.size() == 3);
  CHECK(x.dim() == 2);
  // unit square half-loop: area of the staircase vs its chord is -1/4... sign
  // pinned by the oracle elsewhere; here just confirm a nonzero second level
  CHECK(std::abs(x.value(2).level2()(0, 1) - x.value(2).level2()(1, 0)) > 0.0);
  // output directory is created on demand, like the other subcommands
  const auto fresh = dir.path / "nested" / "out";
  CHECK(run("lift --in " + dir.file("pts.csv") + " --out " + fresh.string()) == 0);
  CHECK(fs::exists(fresh / "lift.csv"));
}

TEST_CASE("bounds refinement runs end to end") {
  TempDir dir;
  write(dir.file("cfg.json"), R"({
    "driver": {"type": "fbm", "dimension": 2, "hurst": 0.5, "samples": 64},
    "sigma": {"preset": "sin_rotation"},
    "drift": {"preset": "zero"},
    "initial_conditions": [[0.3, 0.1]],
    "bounds": {"quantity": "refinement", "grid": [8.0, 16.0]}
  })");
  CHECK(run("bounds --config " + dir.file("cfg.json") + " --out " +
            dir.path.string()) == 0);
  CHECK(fs::exists(dir.file("refinement.csv")));
  CHECK(fs::exists(dir.file("refinement.json")));
}

TEST_CASE("tails floor on replicates is enforced") {
  TempDir dir;
  write(dir.file("cfg.json"), R"({
    "driver": {"type": "fbm", "dimension": 1, "hurst": 0.5, "samples": 16},
    "sigma": {"preset": "scalar_sin"},
    "replicates": 10
  })");
  CHECK(run("tails --config " + dir.file("cfg.json") + " --out " +
            dir.path.string()) == 2);
}
