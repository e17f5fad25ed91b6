#pragma once

#include <string>
#include <vector>

#include "roughflow/control.hpp"
#include "roughflow/drift.hpp"
#include "roughflow/flow.hpp"

namespace roughflow {

// Empirical checks of the solver's growth behaviour. The a priori estimates
// involve an unknown absolute constant, so every verifier is trend-based: it
// reports log-log slopes and predictor ratios and flags superlinear growth,
// never absolute magnitudes.

enum class SweepVariable { xi_norm, n1, horizon, eps };

struct BoundSweep {
  SweepVariable variable = SweepVariable::xi_norm;
  std::vector<double> grid;        // increasing, positive
  Eigen::VectorXd xi_direction;    // unit direction for xi_norm sweeps
  Eigen::VectorXd base_xi;         // initial condition for the other sweeps
  double horizon = -1.0;           // <= 0 means the driver's full span
};

struct SweepPoint {
  double sweep_value = 0.0;
  double n1 = 0.0;        // budget-1 interval count of the driver's p-var control
  double xi_norm = 0.0;
  double horizon = 0.0;
  double predictor = 0.0;  // the estimate's right-hand side without its constant
  double response = 0.0;
  double ratio = 0.0;      // response / predictor
};

struct FitReport {
  std::string quantity;
  std::string variable;
  std::vector<SweepPoint> points;
  double log_slope = 0.0;      // least-squares slope of log response vs log sweep value
  double log_intercept = 0.0;
  double slope_stderr = 0.0;
  double max_ratio = 0.0;
  bool bounded = false;        // log_slope <= 1.1
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
};

// Least-squares fit of log(y) against log(x); pairs with a nonpositive entry
// are skipped. Needs at least two usable pairs.
LineFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Interval count of the driver's p-variation control at budget 1 over [lo, hi].
double n1_of_driver(const SampledRoughPath& x, double p, double lo, double hi);

FitReport verify_sup_bound(const DriftField& b, const VectorFields& sigma,
                           const SampledRoughPath& x, const BoundSweep& sweep,
                           const FlowOptions& opts = {});

FitReport verify_pvar_bound(const DriftField& b, const VectorFields& sigma,
                            const SampledRoughPath& x, const BoundSweep& sweep,
                            const FlowOptions& opts = {});

// Hölder quotient sup |y_t - y_s| / (|t-s| v |t-s|^{1/p}) over recorded pairs.
// Only defined for linear-growth drifts.
FitReport verify_holder_bound(const DriftField& b, const VectorFields& sigma,
                              const SampledRoughPath& x, const BoundSweep& sweep,
                              const FlowOptions& opts = {});

struct ConvergenceReport {
  std::vector<int> levels;        // sample counts of the coarse approximants
  std::vector<double> distances;  // sup distance to the reference at shared times
  std::vector<double> relative;   // distances / max(1, reference sup norm)
  bool monotone = false;
  double final_relative = 0.0;
};

// Solves the same system driven by polyline lifts of the reference driver
// subsampled to each level and reports how the solutions converge. Levels
// must be increasing and divide the reference grid evenly.
ConvergenceReport refinement_consistency(const DriftField& b, const VectorFields& sigma,
                                         const SampledRoughPath& x_ref,
                                         const Eigen::VectorXd& xi,
                                         const std::vector<int>& levels,
                                         const FlowOptions& opts = {});

}  // namespace roughflow
