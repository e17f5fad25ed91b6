#include "roughflow/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughflow {

namespace {

struct SweepCase {
  SampledRoughPath driver;
  Eigen::VectorXd xi;
  double horizon;
};

Eigen::VectorXd unit_or_default(const Eigen::VectorXd& v, int m) {
  if (v.size() == 0) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[0] = 1.0;
    return e;
  }
  if (v.size() != m || !v.allFinite() || v.norm() == 0.0)
    throw std::invalid_argument("bounds: bad sweep direction");
  return v / v.norm();
}

Eigen::VectorXd base_or_zero(const Eigen::VectorXd& v, int m) {
  if (v.size() == 0) return Eigen::VectorXd::Zero(m);
  if (v.size() != m || !v.allFinite())
    throw std::invalid_argument("bounds: bad base initial condition");
  return v;
}

void check_sweep(const BoundSweep& sweep) {
  if (sweep.grid.size() < 2)
    throw std::invalid_argument("bounds: sweep grid needs at least two points");
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
    if (!(sweep.grid[i] > 0.0))
      throw std::invalid_argument("bounds: sweep grid must be positive");
    if (i > 0 && !(sweep.grid[i] > sweep.grid[i - 1]))
      throw std::invalid_argument("bounds: sweep grid must be increasing");
  }
}

SweepCase make_case(const SampledRoughPath& x, const BoundSweep& sweep, double v,
                    int m) {
  const double full = sweep.horizon > 0.0 ? sweep.horizon : x.horizon();
  switch (sweep.variable) {
    case SweepVariable::xi_norm:
      return {x, v * unit_or_default(sweep.xi_direction, m), full};
    case SweepVariable::eps:
    case SweepVariable::n1:
      return {dilate(x, v), base_or_zero(sweep.base_xi, m), full};
    case SweepVariable::horizon:
      if (v > x.horizon() * (1.0 + 1e-12))
        throw std::domain_error("bounds: horizon sweep exceeds the driver's span");
      return {x, base_or_zero(sweep.base_xi, m), std::min(v, x.horizon())};
  }
  throw std::logic_error("bounds: unknown sweep variable");
}

const char* variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::xi_norm: return "xi_norm";
    case SweepVariable::n1: return "n1";
    case SweepVariable::horizon: return "horizon";
    case SweepVariable::eps: return "eps";
  }
  return "?";
}

double holder_quotient(const Trajectory& traj, double p) {
  double sup = 0.0;
  const int n = static_cast<int>(traj.times.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dt = traj.times[j] - traj.times[i];
      if (dt <= 0.0) continue;
      const double denom = std::max(dt, std::pow(dt, 1.0 / p));
      sup = std::max(sup, (traj.values[j] - traj.values[i]).norm() / denom);
    }
  return sup;
}

enum class Quantity { sup, pvar, holder };

FitReport run_sweep(Quantity q, const DriftField& b, const VectorFields& sigma,
                    const SampledRoughPath& x, const BoundSweep& sweep,
                    const FlowOptions& opts) {
  check_sweep(sweep);
  if (q == Quantity::holder && b.mode() != GrowthMode::linear)
    throw std::domain_error("verify_holder_bound: needs a linear-growth drift");

  const int m = sigma.m();
  const double p = opts.solver.p;
  const bool semiflow = b.mode() == GrowthMode::one_sided;

  FitReport report;
  report.quantity = q == Quantity::sup     ? "sup_norm"
                    : q == Quantity::pvar  ? "pvar_norm"
                                           : "holder_quotient";
  report.variable = variable_name(sweep.variable);

  std::vector<double> xs, ys;
  for (double v : sweep.grid) {
    const SweepCase c = make_case(x, sweep, v, m);
    const FlowResult run =
        flow_with_drift(b, sigma, c.driver, 0.0, c.horizon, c.xi, opts);

    SweepPoint pt;
    pt.sweep_value = v;
    pt.n1 = n1_of_driver(c.driver, p, 0.0, c.horizon);
    pt.xi_norm = c.xi.norm();
    pt.horizon = c.horizon;

    switch (q) {
      case Quantity::sup:
        pt.response = run.sup_norm;
        pt.predictor = semiflow ? 1.0 + pt.n1 + pt.xi_norm
                                : 1.0 + pt.n1 + pt.xi_norm + pt.horizon;
        break;
      case Quantity::pvar:
        pt.response = pvar_norm(run.trajectory, p);
        pt.predictor = semiflow
                           ? 1.0 + pt.n1 + pt.xi_norm
                           : 1.0 + pt.n1 + b.kappa2() * pt.xi_norm + pt.horizon;
        break;
      case Quantity::holder: {
        pt.response = holder_quotient(run.trajectory, p);
        const double hx = holder_norm(c.driver, p);
        pt.predictor = 1.0 + b.kappa2() * pt.xi_norm + std::max(hx, std::pow(hx, p));
        break;
      }
    }
    pt.ratio = pt.response / pt.predictor;
    report.max_ratio = std::max(report.max_ratio, pt.ratio);
    report.points.push_back(pt);

    xs.push_back(sweep.variable == SweepVariable::n1 ? 1.0 + pt.n1 : v);
    ys.push_back(pt.response);
  }

  const LineFit fit = loglog_fit(xs, ys);
  report.log_slope = fit.slope;
  report.log_intercept = fit.intercept;
  report.slope_stderr = fit.stderr_slope;
  report.bounded = report.log_slope <= 1.1;
  return report;
}

}  // namespace

LineFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("loglog_fit: length mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] > 0.0 && ys[i] > 0.0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  const int n = static_cast<int>(lx.size());
  if (n < 2) throw std::invalid_argument("loglog_fit: fewer than two usable points");

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_fit: degenerate abscissae");

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = ly[i] - fit.intercept - fit.slope * lx[i];
      rss += r * r;
    }
    fit.stderr_slope = std::sqrt(rss / (n - 2) / sxx);
  }
  return fit;
}

double n1_of_driver(const SampledRoughPath& x, double p, double lo, double hi) {
  const Control omega = Control::pvar_of_path(x, p);
  std::vector<double> grid;
  const double tol = 1e-9 * std::max(1.0, x.horizon());
  grid.push_back(lo);
  for (double u : x.times())
    if (u > lo + tol && u < hi - tol) grid.push_back(u);
  grid.push_back(hi);
  return static_cast<double>(greedy_partition(omega, 1.0, grid).n_delta);
}

FitReport verify_sup_bound(const DriftField& b, const VectorFields& sigma,
                           const SampledRoughPath& x, const BoundSweep& sweep,
                           const FlowOptions& opts) {
  return run_sweep(Quantity::sup, b, sigma, x, sweep, opts);
}

FitReport verify_pvar_bound(const DriftField& b, const VectorFields& sigma,
                            const SampledRoughPath& x, const BoundSweep& sweep,
                            const FlowOptions& opts) {
  return run_sweep(Quantity::pvar, b, sigma, x, sweep, opts);
}

FitReport verify_holder_bound(const DriftField& b, const VectorFields& sigma,
                              const SampledRoughPath& x, const BoundSweep& sweep,
                              const FlowOptions& opts) {
  return run_sweep(Quantity::holder, b, sigma, x, sweep, opts);
}

ConvergenceReport refinement_consistency(const DriftField& b, const VectorFields& sigma,
                                         const SampledRoughPath& x_ref,
                                         const Eigen::VectorXd& xi,
                                         const std::vector<int>& levels,
                                         const FlowOptions& opts) {
  if (levels.size() < 2)
    throw std::invalid_argument("refinement_consistency: need at least two levels");
  const int nref = x_ref.size() - 1;  // reference segment count
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 2 || nref % levels[i] != 0)
      throw std::invalid_argument(
          "refinement_consistency: levels must divide the reference grid");
    if (i > 0 && levels[i] <= levels[i - 1])
      throw std::invalid_argument("refinement_consistency: levels must increase");
  }

  const FlowResult ref =
      flow_with_drift(b, sigma, x_ref, 0.0, x_ref.horizon(), xi, opts);
  const double ref_scale = std::max(1.0, ref.sup_norm);
  const double tol = 1e-9 * std::max(1.0, x_ref.horizon());

  const Eigen::MatrixXd fine = level1_samples(x_ref);
  const auto& ft = x_ref.times();

  ConvergenceReport report;
  report.levels = levels;
  FlowOptions coarse_opts = opts;
  if (!coarse_opts.fixed_budget) coarse_opts.fixed_budget = ref.budget;

  for (int lv : levels) {
    const int stride = nref / lv;
    std::vector<double> ct(lv + 1);
    Eigen::MatrixXd cp(lv + 1, fine.cols());
    for (int i = 0; i <= lv; ++i) {
      ct[i] = ft[static_cast<std::size_t>(i) * stride];
      cp.row(i) = fine.row(static_cast<Eigen::Index>(i) * stride);
    }
    const SampledRoughPath approx = lift_piecewise_linear(cp, ct);
    const FlowResult run =
        flow_with_drift(b, sigma, approx, 0.0, approx.horizon(), xi, coarse_opts);

    // Compare on the coarse node set; the reference records every fine node.
    double dist = 0.0;
    std::size_t ri = 0;
    for (std::size_t j = 0; j < run.trajectory.times.size(); ++j) {
      const double u = run.trajectory.times[j];
      while (ri + 1 < ref.trajectory.times.size() &&
             std::abs(ref.trajectory.times[ri] - u) > tol)
        ++ri;
      if (std::abs(ref.trajectory.times[ri] - u) > tol) continue;
      dist = std::max(dist,
                      (run.trajectory.values[j] - ref.trajectory.values[ri]).norm());
    }
    report.distances.push_back(dist);
    report.relative.push_back(dist / ref_scale);
  }

  report.monotone = true;
  for (std::size_t i = 1; i < report.distances.size(); ++i)
    if (report.distances[i] > report.distances[i - 1] * (1.0 + 1e-9) + 1e-15)
      report.monotone = false;
  report.final_relative = report.relative.back();
  return report;
}

}  // namespace roughflow
