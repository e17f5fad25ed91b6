#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "roughflow/path.hpp"
#include "roughflow/vector_fields.hpp"

namespace roughflow {

struct SolverOptions {
  double p = 2.5;            // variation scale for the step budget
  double step_budget = 0.1;  // every accepted step keeps (nu * step size)^p <= this
  double fd_h = 1e-6;        // finite-difference step for the level-2 coefficient
                             // derivative when the fields carry no hess
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> values;

  double sup_norm() const;
};

// State left the trusted range (non-finite or astronomically large); time()
// is the first driver-grid boundary where that was detected.
class ExplosionError : public std::runtime_error {
 public:
  ExplosionError(double time, const std::string& what)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Step-2 Euler scheme for dy = sigma(y) dx along the sampled driver, one step
// per grid cell plus geodesic sub-steps while the budget requires them.
// t < s integrates the time-reversed driver (the inverse flow).
Trajectory solve_rde(const VectorFields& sigma, const SampledRoughPath& x,
                     const Eigen::VectorXd& xi, double s, double t,
                     const SolverOptions& opts = {});

// Endpoint of the flow map y = psi(s, t, xi).
Eigen::VectorXd rde_flow(const VectorFields& sigma, const SampledRoughPath& x,
                         double s, double t, const Eigen::VectorXd& xi,
                         const SolverOptions& opts = {});

// Derivative of the flow map in xi, propagated by the variational scheme
// alongside the state (exact derivative of the discrete flow when hess is
// available, finite-difference in the level-2 coefficient otherwise).
Eigen::MatrixXd rde_jacobian(const VectorFields& sigma, const SampledRoughPath& x,
                             double s, double t, const Eigen::VectorXd& xi,
                             const SolverOptions& opts = {});

Eigen::MatrixXd rde_inverse_jacobian(const VectorFields& sigma,
                                     const SampledRoughPath& x, double s, double t,
                                     const Eigen::VectorXd& xi,
                                     const SolverOptions& opts = {});

struct FlowAndJacobian {
  Eigen::VectorXd value;
  Eigen::MatrixXd jacobian;
};

// One pass for callers that need both (the drift pullback ODE does).
FlowAndJacobian rde_flow_with_jacobian(const VectorFields& sigma,
                                       const SampledRoughPath& x, double s, double t,
                                       const Eigen::VectorXd& xi,
                                       const SolverOptions& opts = {});

}  // namespace roughflow
