#include "CLI11.hpp"

#include <cstdio>
#include <exception>
#include <string>

#include "roughflow/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFailed = 3;

roughflow::ScenarioConfig load_with_overrides(const std::string& path, int seeds) {
  roughflow::ScenarioConfig cfg = roughflow::load_config(path);
  if (seeds > 0) {
    cfg.seeds.clear();
    for (int i = 0; i < seeds; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"step-2 rough-path flows with unbounded drift"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string lift_in;
  int seeds = 0;
  int workers = 1;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "scenario config JSON")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seeds", seeds, "override seed/replicate count");
    cmd->add_option("--workers", workers, "worker threads");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve the flow per (seed, xi)");
  add_common(solve, true);
  CLI::App* tails = app.add_subcommand("tails", "Monte-Carlo sup-norm tail fit");
  add_common(tails, true);
  CLI::App* ldp = app.add_subcommand("ldp", "small-noise scaling scan");
  add_common(ldp, true);
  CLI::App* bounds = app.add_subcommand("bounds", "growth-bound sweep or refinement");
  add_common(bounds, true);
  CLI::App* lift = app.add_subcommand("lift", "lift a polyline CSV to a rough path");
  lift->add_option("--in", lift_in, "points CSV (t,x_1..x_d)")->required();
  lift->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (solve->parsed()) {
      const auto cfg = load_with_overrides(config_path, seeds);
      const auto summary = roughflow::run_solve(cfg, out_dir, workers);
      for (const auto& line : summary.failures)
        std::fprintf(stderr, "%s\n", line.c_str());
      std::printf("solve: %d/%d runs succeeded\n", summary.succeeded, summary.attempted);
      if (summary.succeeded == 0) return kExitFailed;
      return summary.succeeded == summary.attempted ? kExitOk : kExitPartial;
    }
    if (tails->parsed()) {
      const auto cfg = load_with_overrides(config_path, 0);
      const auto report = roughflow::run_tails(cfg, out_dir, seeds, workers);
      if (report.degenerate)
        std::printf("tails: deterministic sup norms across %d replicates\n",
                    report.replicates);
      else
        std::printf("tails: shape %.4f (floor %.4f) from %d replicates\n",
                    report.shape, report.shape_floor, report.replicates);
      return kExitOk;
    }
    if (ldp->parsed()) {
      const auto cfg = load_with_overrides(config_path, 0);
      const auto report = roughflow::run_ldp(cfg, out_dir, seeds, workers);
      for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      std::printf("ldp: spread %.4f, %s\n", report.spread,
                  report.stabilized ? "stabilized" : "not stabilized");
      return kExitOk;
    }
    if (bounds->parsed()) {
      const auto cfg = load_with_overrides(config_path, 0);
      const auto art = roughflow::run_bounds(cfg, out_dir);
      if (art.is_refinement)
        std::printf("bounds: refinement final relative %.3e, %s\n",
                    art.convergence.final_relative,
                    art.convergence.monotone ? "monotone" : "not monotone");
      else
        std::printf("bounds: %s vs %s slope %.4f (max ratio %.4f)\n",
                    art.fit.quantity.c_str(), art.fit.variable.c_str(),
                    art.fit.log_slope, art.fit.max_ratio);
      return kExitOk;
    }
    if (lift->parsed()) {
      roughflow::run_lift(lift_in, out_dir + "/lift.csv");
      std::printf("lift: wrote %s/lift.csv\n", out_dir.c_str());
      return kExitOk;
    }
  } catch (const roughflow::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailed;
  }
  return kExitOk;
}
