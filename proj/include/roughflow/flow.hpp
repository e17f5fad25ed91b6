#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "roughflow/control.hpp"
#include "roughflow/drift.hpp"
#include "roughflow/rde.hpp"

namespace roughflow {

struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double h_min = 1e-12;  // relative step underflow threshold
  long max_steps = 20000000;
};

// The adaptive integrator could not make progress (step underflow at time()).
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(double time, const std::string& what)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Budget selection found no admissible partition budget above the floor.
class BudgetSelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Time-indexed flow handles feeding the pullback ODE
//   z'(u) = J(u, z) b(psi(u, z)),
// where psi is a flow started at the active anchor and J the inverse of its
// xi-derivative. eval returns both in one pass.
struct FlowFrame {
  std::function<std::pair<Eigen::VectorXd, Eigen::MatrixXd>(double,
                                                            const Eigen::VectorXd&)>
      eval;
};

// Production frame: psi / J solved from the driftless equation anchored at
// `anchor`. Borrows sigma and x; keep them alive while the frame is used.
FlowFrame rde_frame(const VectorFields& sigma, const SampledRoughPath& x,
                    double anchor, const SolverOptions& opts = {});

struct PullbackDiagnostics {
  double max_jacobian_dev = 0.0;  // max ||J - I|| over right-hand-side evals
  double one_var = 0.0;           // sum of |z| step sizes over accepted steps
  long steps = 0;                 // accepted steps
};

// Embedded Dormand-Prince 5(4) integration of the pullback ODE from t0 to t1
// (either direction). Integration restarts at each mandatory node, so node
// values are exact trajectory points. Records every accepted step.
Trajectory pullback_ode_solve(const DriftField& b, const FlowFrame& frame, double t0,
                              double t1, const Eigen::VectorXd& z0,
                              const OdeOptions& opts = {},
                              std::span<const double> mandatory = {},
                              PullbackDiagnostics* diag = nullptr);

// Production pullback: frame anchored at s, integrated to t.
Trajectory pullback_ode_solve(const DriftField& b, const VectorFields& sigma,
                              const SampledRoughPath& x, double s, double t,
                              const Eigen::VectorXd& xi, const OdeOptions& ode = {},
                              const SolverOptions& solver = {});

struct FlowOptions {
  SolverOptions solver;
  OdeOptions ode;
  std::optional<double> fixed_budget;  // skip selection, use this partition budget
  double budget_floor = 1e-6;
  double probe_radius = 2.0;       // xi probe box half-width for budget selection
  int max_probe_intervals = 6;     // intervals probed per candidate budget
  std::optional<Control> partition_control;  // default: pvar control + |t - s|
};

// Largest budget in the halving sweep 1, 1/2, 1/4, ... whose greedy intervals
// pass the contraction probes (|psi - xi| <= 1, ||J - I|| <= 1/2, and in
// one_sided mode the quarter-contraction of xi -> psi(xi) - xi); linear mode
// additionally requires 2 (kappa1 + kappa2) budget <= 1. Throws
// BudgetSelectionError below budget_floor.
double select_partition_budget(const DriftField& b, const VectorFields& sigma,
                               const SampledRoughPath& x, double lo, double hi,
                               const FlowOptions& opts = {});

struct IntervalReport {
  double lo = 0.0, hi = 0.0;
  double omega = 0.0;  // partition-control budget actually consumed
  double max_jacobian_dev = 0.0;
  double pullback_one_var = 0.0;
  long ode_steps = 0;
};

struct FlowResult {
  Trajectory trajectory;  // in solve order; recorded at driver grid times
  GreedyPartition partition;
  double budget = 0.0;
  std::vector<IntervalReport> intervals;
  double sup_norm = 0.0;
};

// Flow of the full equation dy = b(y) dt + sigma(y) dx: on each greedy
// interval the drift is integrated in the frame of the driftless flow, then
// pushed through it; intervals compose. Backward (t < s) requires linear mode.
FlowResult flow_with_drift(const DriftField& b, const VectorFields& sigma,
                           const SampledRoughPath& x, double s, double t,
                           const Eigen::VectorXd& xi, const FlowOptions& opts = {});

// Level-1 p-variation of a trajectory (Euclidean increments, exact DP).
double pvar_norm(const Trajectory& traj, double p);

// sup over matched output nodes of |z1 - z2| for the pullback ODE driven by
// two frames (the stability gauge for frame perturbations).
double perturbation_gap(const DriftField& b, const FlowFrame& frame1,
                        const FlowFrame& frame2, const Eigen::VectorXd& xi1,
                        const Eigen::VectorXd& xi2, double horizon,
                        const OdeOptions& opts = {}, int nodes = 129);

}  // namespace roughflow
