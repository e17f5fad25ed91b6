#include "roughflow/flow.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace roughflow {

namespace {

double op_norm(const Eigen::MatrixXd& a) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
}

Eigen::MatrixXd invert_jacobian(const Eigen::MatrixXd& M) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible())
    throw std::runtime_error("flow: flow Jacobian is singular; please report");
  return lu.inverse();
}

using Rhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
using AcceptFn = std::function<void(double, const Eigen::VectorXd&, double)>;

// Dormand-Prince 5(4) pair with FSAL; h signed, so one routine serves both
// time directions. Non-finite stages reject the step instead of aborting:
// only a genuine state blow-up or step underflow raises.
void dp45_segment(const Rhs& f, double t0, double t1, Eigen::VectorXd& z,
                  const OdeOptions& o, long& trials, const AcceptFn& on_accept) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                          e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                          e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

  const double span = t1 - t0;
  if (span == 0.0) return;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  const double t_scale = std::max({1.0, std::abs(t0), std::abs(t1)});

  double t = t0;
  double h = span / 8.0;
  Eigen::VectorXd k1, k2, k3, k4, k5, k6, k7, ztrial;
  bool have_k1 = false;

  while (dir * (t1 - t) > 1e-14 * t_scale) {
    if (dir * (t + h) > dir * t1) h = t1 - t;

    double err = std::numeric_limits<double>::infinity();
    bool stages_ok = true;
    try {
      if (!have_k1) {
        k1 = f(t, z);
        have_k1 = true;
      }
      k2 = f(t + c2 * h, z + h * (a21 * k1));
      k3 = f(t + c3 * h, z + h * (a31 * k1 + a32 * k2));
      k4 = f(t + c4 * h, z + h * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = f(t + c5 * h, z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = f(t + h, z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      ztrial = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = f(t + h, ztrial);

      const Eigen::VectorXd zerr =
          h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double scale =
            o.abs_tol + o.rel_tol * std::max(std::abs(z[i]), std::abs(ztrial[i]));
        const double q = zerr[i] / scale;
        acc += q * q;
      }
      err = std::sqrt(acc / static_cast<double>(z.size()));
      if (!std::isfinite(err) || !ztrial.allFinite())
        stages_ok = false;
    } catch (const ExplosionError&) {
      stages_ok = false;  // trial state left the solvable range; shrink h
    }

    if (++trials > o.max_steps)
      throw std::runtime_error("pullback_ode_solve: step limit exceeded");

    if (stages_ok && err <= 1.0) {
      t = (std::abs(t + h - t1) <= 1e-14 * t_scale) ? t1 : t + h;
      const double step_size = (ztrial - z).norm();
      z = ztrial;
      k1 = k7;  // first-same-as-last
      on_accept(t, z, step_size);
      if (!z.allFinite() || z.norm() > 1e12)
        throw ExplosionError(t, "pullback_ode_solve: state exploded at t=" +
                                    std::to_string(t));
      const double grow =
          (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= grow;
    } else {
      have_k1 = true;  // k1 is still valid at unchanged (t, z)
      const double shrink =
          stages_ok ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5) : 0.1;
      h *= shrink;
      if (std::abs(h) < o.h_min * t_scale)
        throw StiffnessError(
            t, "pullback_ode_solve: step underflow at t=" + std::to_string(t));
    }
  }
}

std::vector<double> build_nodes(double t0, double t1, std::span<const double> mandatory) {
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const double tol = 1e-12 * std::max({1.0, std::abs(t0), std::abs(t1)});
  std::vector<double> nodes{t0};
  std::vector<double> interior(mandatory.begin(), mandatory.end());
  std::sort(interior.begin(), interior.end(),
            [dir](double a, double b) { return dir * a < dir * b; });
  for (double u : interior)
    if (dir * u > dir * t0 + tol && dir * u < dir * t1 - tol &&
        std::abs(u - nodes.back()) > tol)
      nodes.push_back(u);
  nodes.push_back(t1);
  return nodes;
}

}  // namespace

FlowFrame rde_frame(const VectorFields& sigma, const SampledRoughPath& x,
                    double anchor, const SolverOptions& opts) {
  const VectorFields* sp = &sigma;
  const SampledRoughPath* xp = &x;
  FlowFrame frame;
  frame.eval = [sp, xp, anchor, opts](double u, const Eigen::VectorXd& z) {
    auto fj = rde_flow_with_jacobian(*sp, *xp, anchor, u, z, opts);
    return std::make_pair(std::move(fj.value), invert_jacobian(fj.jacobian));
  };
  return frame;
}

Trajectory pullback_ode_solve(const DriftField& b, const FlowFrame& frame, double t0,
                              double t1, const Eigen::VectorXd& z0,
                              const OdeOptions& opts,
                              std::span<const double> mandatory,
                              PullbackDiagnostics* diag) {
  if (z0.size() != b.m())
    throw std::invalid_argument("pullback_ode_solve: initial state size mismatch");
  if (!z0.allFinite())
    throw std::invalid_argument("pullback_ode_solve: initial state must be finite");
  if (t1 < t0 && b.mode() == GrowthMode::one_sided)
    throw std::domain_error(
        "pullback_ode_solve: backward integration requires linear-growth drift");

  PullbackDiagnostics local;
  PullbackDiagnostics& d = diag ? *diag : local;
  d = PullbackDiagnostics{};

  const int m = b.m();
  Rhs f = [&](double u, const Eigen::VectorXd& z) {
    auto [psi, jinv] = frame.eval(u, z);
    d.max_jacobian_dev = std::max(
        d.max_jacobian_dev, op_norm(jinv - Eigen::MatrixXd::Identity(m, m)));
    return (jinv * b.eval(psi)).eval();
  };

  Trajectory traj;
  traj.times.push_back(t0);
  traj.values.push_back(z0);
  Eigen::VectorXd z = z0;
  long trials = 0;

  const auto nodes = build_nodes(t0, t1, mandatory);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    dp45_segment(f, nodes[i], nodes[i + 1], z, opts, trials,
                 [&](double u, const Eigen::VectorXd& zu, double step) {
                   traj.times.push_back(u);
                   traj.values.push_back(zu);
                   d.one_var += step;
                   ++d.steps;
                 });
    traj.times.back() = nodes[i + 1];  // snap the segment end to the node
  }
  return traj;
}

Trajectory pullback_ode_solve(const DriftField& b, const VectorFields& sigma,
                              const SampledRoughPath& x, double s, double t,
                              const Eigen::VectorXd& xi, const OdeOptions& ode,
                              const SolverOptions& solver) {
  if (b.m() != sigma.m())
    throw std::invalid_argument("pullback_ode_solve: drift/fields dimension mismatch");
  const FlowFrame frame = rde_frame(sigma, x, s, solver);
  return pullback_ode_solve(b, frame, s, t, xi, ode, {}, nullptr);
}

double select_partition_budget(const DriftField& b, const VectorFields& sigma,
                               const SampledRoughPath& x, double lo, double hi,
                               const FlowOptions& opts) {
  if (!(lo < hi)) throw std::domain_error("select_partition_budget: need lo < hi");
  const int m = sigma.m();
  const Control control =
      opts.partition_control
          ? *opts.partition_control
          : Control::sum(Control::pvar_of_path(x, opts.solver.p),
                         Control::holder(1.0, 1.0, x.horizon()));

  const double tol = 1e-9 * std::max(1.0, x.horizon());
  std::vector<double> grid{lo};
  for (double u : x.times())
    if (u > lo + tol && u < hi - tol) grid.push_back(u);
  grid.push_back(hi);

  // xi probes: origin plus +-probe_radius along the first few axes.
  std::vector<Eigen::VectorXd> probes;
  probes.push_back(Eigen::VectorXd::Zero(m));
  for (int i = 0; i < std::min(m, 3); ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[i] = opts.probe_radius;
    probes.push_back(e);
    probes.push_back(-e);
  }

  const bool pair_condition = b.mode() == GrowthMode::one_sided;
  const double kappa_sum = b.kappa1() + b.kappa2();

  for (double budget = 1.0; budget >= opts.budget_floor; budget /= 2.0) {
    if (b.mode() == GrowthMode::linear && 2.0 * kappa_sum * budget > 1.0) continue;

    const GreedyPartition part = greedy_partition(control, budget, grid);
    const int K = static_cast<int>(part.times.size()) - 1;
    std::vector<int> picks;
    const int nprobe = std::min(opts.max_probe_intervals, K);
    for (int i = 0; i < nprobe; ++i)
      picks.push_back(nprobe == 1 ? 0 : i * (K - 1) / (nprobe - 1));
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());

    bool ok = true;
    for (int pi : picks) {
      if (!ok) break;
      const double a = part.times[pi];
      const double c = part.times[pi + 1];
      std::vector<Eigen::VectorXd> dev_mid, dev_end;
      for (const auto& xi : probes) {
        if (!ok) break;
        try {
          for (double u : {0.5 * (a + c), c}) {
            const auto fj = rde_flow_with_jacobian(sigma, x, a, u, xi, opts.solver);
            if ((fj.value - xi).norm() > 1.0 ||
                op_norm(invert_jacobian(fj.jacobian) -
                        Eigen::MatrixXd::Identity(m, m)) > 0.5) {
              ok = false;
              break;
            }
            (u == c ? dev_end : dev_mid).push_back(fj.value - xi);
          }
        } catch (const ExplosionError&) {
          ok = false;
        } catch (const std::runtime_error&) {
          ok = false;  // singular Jacobian on this interval: budget too large
        }
      }
      if (ok && pair_condition) {
        for (const auto* devs : {&dev_mid, &dev_end})
          for (std::size_t i = 0; i < devs->size() && ok; ++i)
            for (std::size_t j = i + 1; j < devs->size() && ok; ++j) {
              const double gap = ((*devs)[i] - (*devs)[j]).norm();
              if (gap > 0.25 * (probes[i] - probes[j]).norm()) ok = false;
            }
      }
    }
    if (ok) return budget;
  }
  throw BudgetSelectionError(
      "select_partition_budget: no admissible budget above the floor " +
      std::to_string(opts.budget_floor));
}

FlowResult flow_with_drift(const DriftField& b, const VectorFields& sigma,
                           const SampledRoughPath& x, double s, double t,
                           const Eigen::VectorXd& xi, const FlowOptions& opts) {
  if (b.m() != sigma.m())
    throw std::invalid_argument("flow_with_drift: drift/fields dimension mismatch");
  if (sigma.d() != x.dim())
    throw std::invalid_argument("flow_with_drift: fields/driver dimension mismatch");
  if (xi.size() != sigma.m() || !xi.allFinite())
    throw std::invalid_argument("flow_with_drift: bad initial condition");
  const double tol = 1e-9 * std::max(1.0, x.horizon());
  if (s < -tol || s > x.horizon() + tol || t < -tol || t > x.horizon() + tol)
    throw std::domain_error("flow_with_drift: [s,t] outside the driver's span");

  const bool backward = t < s;
  if (backward && b.mode() == GrowthMode::one_sided)
    throw std::domain_error(
        "flow_with_drift: backward flow requires linear-growth drift");

  FlowResult R;
  if (std::abs(t - s) <= tol) {
    R.trajectory.times.push_back(s);
    R.trajectory.values.push_back(xi);
    R.partition.times = {s};
    R.sup_norm = xi.norm();
    return R;
  }

  const double lo = std::min(s, t), hi = std::max(s, t);
  const Control control =
      opts.partition_control
          ? *opts.partition_control
          : Control::sum(Control::pvar_of_path(x, opts.solver.p),
                         Control::holder(1.0, 1.0, x.horizon()));

  // With zero drift the pullback state never moves, so any partition yields
  // the same composition; skip the probe sweep and use a single interval.
  R.budget = opts.fixed_budget ? *opts.fixed_budget
             : b.is_zero()     ? control(lo, hi) + 1.0
                               : select_partition_budget(b, sigma, x, lo, hi, opts);
  std::vector<double> grid{lo};
  for (double u : x.times())
    if (u > lo + tol && u < hi - tol) grid.push_back(u);
  grid.push_back(hi);
  R.partition = greedy_partition(control, R.budget, grid);

  const auto& tau = R.partition.times;
  const int K = static_cast<int>(tau.size()) - 1;

  Eigen::VectorXd y = xi;
  R.trajectory.times.push_back(s);
  R.trajectory.values.push_back(xi);

  for (int step = 0; step < K; ++step) {
    // Forward: anchor at the interval's left end. Backward: anchor at the
    // right end and integrate the pullback ODE down to the left end.
    const double a = backward ? tau[K - step] : tau[step];
    const double c = backward ? tau[K - step - 1] : tau[step + 1];

    std::vector<double> mandatory;
    for (double u : grid)
      if (u > std::min(a, c) + tol && u < std::max(a, c) - tol) mandatory.push_back(u);
    if (backward) std::reverse(mandatory.begin(), mandatory.end());

    IntervalReport rep;
    rep.lo = std::min(a, c);
    rep.hi = std::max(a, c);
    rep.omega = control(rep.lo, rep.hi);

    if (b.is_zero()) {
      // Identically-zero drift: the pullback state never moves, so one
      // driftless pass records the whole interval.
      const Trajectory psi = solve_rde(sigma, x, y, a, c, opts.solver);
      for (std::size_t j = 1; j < psi.times.size(); ++j) {
        R.trajectory.times.push_back(psi.times[j]);
        R.trajectory.values.push_back(psi.values[j]);
      }
      y = psi.values.back();
    } else {
      const FlowFrame frame = rde_frame(sigma, x, a, opts.solver);
      PullbackDiagnostics pd;
      const Trajectory z =
          pullback_ode_solve(b, frame, a, c, y, opts.ode, mandatory, &pd);
      rep.max_jacobian_dev = pd.max_jacobian_dev;
      rep.pullback_one_var = pd.one_var;
      rep.ode_steps = pd.steps;

      std::vector<double> nodes = mandatory;
      nodes.push_back(c);
      std::size_t zi = 0;
      const double ntol = 1e-9 * std::max(1.0, x.horizon());
      for (double u : nodes) {
        while (zi + 1 < z.times.size() && std::abs(z.times[zi] - u) > ntol) ++zi;
        const Eigen::VectorXd yu = rde_flow(sigma, x, a, u, z.values[zi], opts.solver);
        R.trajectory.times.push_back(u);
        R.trajectory.values.push_back(yu);
        if (u == c) y = yu;
      }
    }
    R.intervals.push_back(rep);
  }

  R.sup_norm = R.trajectory.sup_norm();
  return R;
}

double pvar_norm(const Trajectory& traj, double p) {
  if (!(p >= 1.0)) throw std::domain_error("pvar_norm: need p >= 1");
  const int n = static_cast<int>(traj.values.size());
  if (n < 2) return 0.0;
  std::vector<double> best(n, 0.0);
  for (int j = 1; j < n; ++j) {
    double bj = 0.0;
    for (int i = 0; i < j; ++i) {
      const double cand = best[i] + std::pow((traj.values[j] - traj.values[i]).norm(), p);
      if (cand > bj) bj = cand;
    }
    best[j] = bj;
  }
  return std::pow(best[n - 1], 1.0 / p);
}

double perturbation_gap(const DriftField& b, const FlowFrame& frame1,
                        const FlowFrame& frame2, const Eigen::VectorXd& xi1,
                        const Eigen::VectorXd& xi2, double horizon,
                        const OdeOptions& opts, int nodes) {
  if (!(horizon > 0.0) || nodes < 2)
    throw std::invalid_argument("perturbation_gap: need horizon > 0 and nodes >= 2");
  std::vector<double> mandatory;
  for (int i = 1; i + 1 < nodes; ++i)
    mandatory.push_back(horizon * i / (nodes - 1));

  const Trajectory z1 = pullback_ode_solve(b, frame1, 0.0, horizon, xi1, opts, mandatory);
  const Trajectory z2 = pullback_ode_solve(b, frame2, 0.0, horizon, xi2, opts, mandatory);

  // Compare at the shared mandatory nodes (both trajectories snap to them).
  const double tol = 1e-12 * std::max(1.0, horizon);
  double gap = (xi1 - xi2).norm();
  std::size_t i1 = 0, i2 = 0;
  std::vector<double> all_nodes = mandatory;
  all_nodes.push_back(horizon);
  for (double u : all_nodes) {
    while (i1 + 1 < z1.times.size() && std::abs(z1.times[i1] - u) > tol) ++i1;
    while (i2 + 1 < z2.times.size() && std::abs(z2.times[i2] - u) > tol) ++i2;
    gap = std::max(gap, (z1.values[i1] - z2.values[i2]).norm());
  }
  return gap;
}

}  // namespace roughflow
