#pragma once

#include <string>
#include <vector>

#include "roughflow/bounds.hpp"
#include "roughflow/scenario.hpp"

namespace roughflow {

// Workloads behind the CLI subcommands. Each writes its artifacts under
// out_dir and returns a summary the caller can map to an exit code. Runs are
// parallel over seeds with a bounded pool; outputs are merged by seed index,
// so results are reproducible for a fixed (config, seeds) regardless of
// worker count.

struct RunSummary {
  int attempted = 0;
  int succeeded = 0;
  std::vector<std::string> failures;  // one "run ...: message" line per failure
};

RunSummary run_solve(const ScenarioConfig& cfg, const std::string& out_dir,
                     int workers = 1);

struct TailReport {
  int replicates = 0;
  double rho = 0.0;
  double shape = 0.0;         // slope of log(-log survival) vs log radius, top decile
  double shape_stderr = 0.0;
  double shape_floor = 0.0;   // 2 / rho - 0.4
  bool degenerate = false;    // sup norms (nearly) constant across replicates
  std::vector<double> radii;
  std::vector<double> survival;
};

TailReport run_tails(const ScenarioConfig& cfg, const std::string& out_dir,
                     int replicates_override = 0, int workers = 1);

struct LdpReport {
  std::vector<double> eps;
  std::vector<double> p_hat;
  std::vector<double> q;      // -eps^2 log p_hat; +inf recorded when p_hat = 0
  double spread = 0.0;        // relative spread of the last three finite q
  bool stabilized = false;
  std::vector<std::string> warnings;
};

LdpReport run_ldp(const ScenarioConfig& cfg, const std::string& out_dir,
                  int replicates_override = 0, int workers = 1);

struct BoundsArtifacts {
  bool is_refinement = false;
  FitReport fit;                  // sweep quantities
  ConvergenceReport convergence;  // refinement quantity
};

BoundsArtifacts run_bounds(const ScenarioConfig& cfg, const std::string& out_dir);

void run_lift(const std::string& points_csv, const std::string& out_csv);

// Smallest C >= 0 with (C*T + xi_norm) * exp(C*T) >= sup; the growth constant
// a single trajectory exhibits against the sup-norm estimate's shape.
double fit_sup_constant(double sup, double xi_norm, double horizon);

}  // namespace roughflow
