#include "roughflow/rde.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace roughflow {

double Trajectory::sup_norm() const {
  double sup = 0.0;
  for (const auto& v : values) sup = std::max(sup, v.norm());
  return sup;
}

namespace {

constexpr double kStateCap = 1e12;

void check_inputs(const VectorFields& sigma, const SampledRoughPath& x,
                  const Eigen::VectorXd& xi, double s, double t) {
  if (sigma.d() != x.dim())
    throw std::invalid_argument("solve_rde: sigma driver dimension != path dimension");
  if (xi.size() != sigma.m())
    throw std::invalid_argument("solve_rde: xi size != state dimension");
  const double tol = 1e-9 * std::max(1.0, x.horizon());
  if (s < -tol || s > x.horizon() + tol || t < -tol || t > x.horizon() + tol)
    throw std::domain_error("solve_rde: [s,t] outside the driver's span");
}

// Cell boundaries from s to t (direction-aware), grid times in between.
std::vector<double> cell_boundaries(const SampledRoughPath& x, double s, double t) {
  const double tol = 1e-9 * std::max(1.0, x.horizon());
  std::vector<double> bnd{s};
  const auto& times = x.times();
  if (t > s) {
    for (double u : times)
      if (u > s + tol && u < t - tol) bnd.push_back(u);
  } else {
    for (auto it = times.rbegin(); it != times.rend(); ++it)
      if (*it < s - tol && *it > t + tol) bnd.push_back(*it);
  }
  bnd.push_back(t);
  return bnd;
}

// Level-2 scheme coefficient G(y) = sum_{ij} B_ij * (D sigma_j sigma_i)(y),
// assembled from SB = sigma(y) * B and the derivative slices.
Eigen::VectorXd level2_coeff(const std::vector<Eigen::MatrixXd>& js,
                             const Eigen::MatrixXd& SB) {
  const int m = static_cast<int>(js.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
  for (int b = 0; b < m; ++b) g += js[b] * SB.row(b).transpose();
  return g;
}

Eigen::VectorXd level2_coeff_at(const VectorFields& sigma, const Eigen::VectorXd& y,
                                const Eigen::MatrixXd& B) {
  const Eigen::MatrixXd SB = sigma.eval(y) * B;
  return level2_coeff(sigma.jac(y), SB);
}

// One scheme step with increment g = (a, B):
//   y   <- y + sigma(y) a + G(y)
//   M   <- M + [D(sigma a)(y) + DG(y)] M        (when M != nullptr)
void apply_step(const VectorFields& sigma, const SolverOptions& opts,
                const Eigen::VectorXd& a, const Eigen::MatrixXd& B,
                Eigen::VectorXd& y, Eigen::MatrixXd* M) {
  const int m = sigma.m();
  const Eigen::MatrixXd S = sigma.eval(y);
  const auto js = sigma.jac(y);
  const Eigen::MatrixXd SB = S * B;
  const Eigen::VectorXd G = level2_coeff(js, SB);

  if (M) {
    Eigen::MatrixXd A(m, m);
    for (int b = 0; b < m; ++b) A.col(b) = js[b] * a;
    if (sigma.has_hess()) {
      const auto hs = sigma.hess(y);
      for (int b = 0; b < m; ++b) {
        Eigen::VectorXd col = Eigen::VectorXd::Zero(m);
        const Eigen::MatrixXd JbB = js[b] * B;
        for (int e = 0; e < m; ++e) {
          col += hs[b][e] * SB.row(e).transpose();
          col += js[e] * JbB.row(e).transpose();
        }
        A.col(b) += col;
      }
    } else {
      const double h = opts.fd_h;
      for (int b = 0; b < m; ++b) {
        Eigen::VectorXd yp = y, ym = y;
        yp[b] += h;
        ym[b] -= h;
        A.col(b) += (level2_coeff_at(sigma, yp, B) - level2_coeff_at(sigma, ym, B)) / (2.0 * h);
      }
    }
    *M += A * *M;
  }
  y += S * a + G;
}

template <class Rec>
void run_scheme(const VectorFields& sigma, const SampledRoughPath& x, double s,
                double t, Eigen::VectorXd& y, Eigen::MatrixXd* M,
                const SolverOptions& opts, Rec&& rec) {
  if (!(opts.p >= 1.0) || !(opts.step_budget > 0.0))
    throw std::invalid_argument("solve_rde: need p >= 1 and step_budget > 0");
  const double tol = 1e-9 * std::max(1.0, x.horizon());
  if (std::abs(t - s) <= tol) return;

  const auto bnd = cell_boundaries(x, s, t);
  for (std::size_t c = 0; c + 1 < bnd.size(); ++c) {
    const GroupElement g = x.increment(bnd[c], bnd[c + 1]);
    const double beta = std::pow(sigma.nu() * homogeneous_norm(g), opts.p);
    int k = 1;
    if (beta > opts.step_budget)
      k = static_cast<int>(std::min(1e7, std::ceil(beta / opts.step_budget)));
    if (k == 1) {
      apply_step(sigma, opts, g.level1(), g.level2(), y, M);
    } else {
      // Equal geodesic sub-steps: exp(log(g)/k) composed k times recovers g
      // exactly (collinear logs commute), so sub-stepping never biases the
      // driver, only refines the scheme.
      const GroupElement sub = group_exp(g.level1() / k, log_area(g) / k);
      for (int i = 0; i < k; ++i)
        apply_step(sigma, opts, sub.level1(), sub.level2(), y, M);
    }
    if (!y.allFinite() || y.norm() > kStateCap)
      throw ExplosionError(bnd[c + 1], "solve_rde: state exploded at t=" +
                                           std::to_string(bnd[c + 1]));
    rec(bnd[c + 1], y);
  }
}

}  // namespace

Trajectory solve_rde(const VectorFields& sigma, const SampledRoughPath& x,
                     const Eigen::VectorXd& xi, double s, double t,
                     const SolverOptions& opts) {
  check_inputs(sigma, x, xi, s, t);
  Trajectory traj;
  traj.times.push_back(s);
  traj.values.push_back(xi);
  Eigen::VectorXd y = xi;
  run_scheme(sigma, x, s, t, y, nullptr, opts, [&](double u, const Eigen::VectorXd& v) {
    traj.times.push_back(u);
    traj.values.push_back(v);
  });
  return traj;
}

Eigen::VectorXd rde_flow(const VectorFields& sigma, const SampledRoughPath& x,
                         double s, double t, const Eigen::VectorXd& xi,
                         const SolverOptions& opts) {
  check_inputs(sigma, x, xi, s, t);
  Eigen::VectorXd y = xi;
  run_scheme(sigma, x, s, t, y, nullptr, opts, [](double, const Eigen::VectorXd&) {});
  return y;
}

FlowAndJacobian rde_flow_with_jacobian(const VectorFields& sigma,
                                       const SampledRoughPath& x, double s, double t,
                                       const Eigen::VectorXd& xi,
                                       const SolverOptions& opts) {
  check_inputs(sigma, x, xi, s, t);
  FlowAndJacobian out;
  out.value = xi;
  out.jacobian = Eigen::MatrixXd::Identity(sigma.m(), sigma.m());
  run_scheme(sigma, x, s, t, out.value, &out.jacobian, opts,
             [](double, const Eigen::VectorXd&) {});
  return out;
}

Eigen::MatrixXd rde_jacobian(const VectorFields& sigma, const SampledRoughPath& x,
                             double s, double t, const Eigen::VectorXd& xi,
                             const SolverOptions& opts) {
  return rde_flow_with_jacobian(sigma, x, s, t, xi, opts).jacobian;
}

Eigen::MatrixXd rde_inverse_jacobian(const VectorFields& sigma,
                                     const SampledRoughPath& x, double s, double t,
                                     const Eigen::VectorXd& xi,
                                     const SolverOptions& opts) {
  const Eigen::MatrixXd M = rde_jacobian(sigma, x, s, t, xi, opts);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "rde_inverse_jacobian: flow Jacobian is singular; please report");
  return lu.inverse();
}

}  // namespace roughflow
