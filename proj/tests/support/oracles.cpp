#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "roughflow/tensor.hpp"

namespace testsupport {

using roughflow::GroupElement;

double brute_pvar(const std::vector<GroupElement>& values, double p) {
  const int n = static_cast<int>(values.size());
  if (n < 2) return 0.0;
  const int interior = n - 2;
  if (interior > 20) throw std::invalid_argument("brute_pvar: too many points");
  double best = 0.0;
  const unsigned long masks = 1ul << interior;
  std::vector<int> chain;
  for (unsigned long mask = 0; mask < masks; ++mask) {
    chain.clear();
    chain.push_back(0);
    for (int k = 0; k < interior; ++k)
      if (mask & (1ul << k)) chain.push_back(k + 1);
    chain.push_back(n - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      sum += std::pow(roughflow::distance(values[chain[i]], values[chain[i + 1]]), p);
    best = std::max(best, sum);
  }
  return std::pow(best, 1.0 / p);
}

double polyline_levy_area(const Eigen::MatrixXd& points, int i, int j, int ci,
                          int cj) {
  // Shoelace area of the closed loop: path samples i..j, then the chord back.
  double twice = 0.0;
  auto cross = [&](int a, int b) {
    return points(a, ci) * points(b, cj) - points(b, ci) * points(a, cj);
  };
  for (int k = i; k < j; ++k) twice += cross(k, k + 1);
  twice += cross(j, i);
  return 0.5 * twice;
}

Eigen::VectorXd rk4_polyline_ode(const roughflow::VectorFields& sigma,
                                 const roughflow::DriftField* b,
                                 const Eigen::MatrixXd& points,
                                 const std::vector<double>& times,
                                 const Eigen::VectorXd& xi, double s, double t,
                                 int steps_per_cell) {
  const int cells = static_cast<int>(times.size()) - 1;
  auto rhs = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& v) {
    Eigen::VectorXd f = sigma.eval(y) * v;
    if (b != nullptr) f += b->eval(y);
    return f;
  };
  auto run_span = [&](Eigen::VectorXd y, double u0, double u1, int cell) {
    const double dt_cell = times[cell + 1] - times[cell];
    Eigen::VectorXd v = (points.row(cell + 1) - points.row(cell)).transpose() / dt_cell;
    const double h = (u1 - u0) / steps_per_cell;
    for (int k = 0; k < steps_per_cell; ++k) {
      Eigen::VectorXd k1 = rhs(y, v);
      Eigen::VectorXd k2 = rhs(y + 0.5 * h * k1, v);
      Eigen::VectorXd k3 = rhs(y + 0.5 * h * k2, v);
      Eigen::VectorXd k4 = rhs(y + h * k3, v);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
  };
  auto cell_of = [&](double u) {
    int c = 0;
    while (c + 1 < cells && times[c + 1] <= u) ++c;
    return c;
  };

  Eigen::VectorXd y = xi;
  if (t == s) return y;
  const bool fwd = t > s;
  double u = s;
  while (fwd ? u < t - 1e-15 : u > t + 1e-15) {
    int c = cell_of(u);
    if (!fwd && u <= times[c] + 1e-15 && c > 0) --c;
    double edge = fwd ? std::min(times[c + 1], t) : std::max(times[c], t);
    y = run_span(std::move(y), u, edge, c);
    u = edge;
  }
  return y;
}

std::vector<Eigen::VectorXd> rk4_polyline_trajectory(
    const roughflow::VectorFields& sigma, const roughflow::DriftField* b,
    const Eigen::MatrixXd& points, const std::vector<double>& times,
    const Eigen::VectorXd& xi, int steps_per_cell) {
  std::vector<Eigen::VectorXd> out;
  out.push_back(xi);
  Eigen::VectorXd y = xi;
  for (std::size_t c = 0; c + 1 < times.size(); ++c) {
    y = rk4_polyline_ode(sigma, b, points, times, y, times[c], times[c + 1],
                         steps_per_cell);
    out.push_back(y);
  }
  return out;
}

Eigen::MatrixXd central_fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& y, double h) {
  const Eigen::VectorXd f0 = f(y);
  Eigen::MatrixXd J(f0.size(), y.size());
  for (int j = 0; j < y.size(); ++j) {
    Eigen::VectorXd yp = y, ym = y;
    yp[j] += h;
    ym[j] -= h;
    J.col(j) = (f(yp) - f(ym)) / (2.0 * h);
  }
  return J;
}

SmoothPolyline random_smooth_polyline(int d, int cells, double amplitude,
                                      std::mt19937_64& rng, double horizon) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
  constexpr int modes = 4;
  Eigen::MatrixXd coef(d, modes);
  Eigen::MatrixXd phase(d, modes);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < modes; ++k) {
      coef(i, k) = amplitude * gauss(rng) / (k + 1);
      phase(i, k) = unif(rng);
    }
  SmoothPolyline out;
  out.times.resize(cells + 1);
  out.points.resize(cells + 1, d);
  for (int j = 0; j <= cells; ++j) {
    const double t = horizon * j / cells;
    out.times[j] = t;
    for (int i = 0; i < d; ++i) {
      double v = 0.0;
      for (int k = 0; k < modes; ++k)
        v += coef(i, k) * (std::sin(2.0 * M_PI * (k + 1) * t / horizon + phase(i, k)) -
                           std::sin(phase(i, k)));
      out.points(j, i) = v;
    }
  }
  return out;
}

GroupElement random_group_element(int d, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd a(d);
  for (int i = 0; i < d; ++i) a[i] = scale * gauss(rng);
  Eigen::MatrixXd area = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      area(i, j) = scale * scale * gauss(rng);
      area(j, i) = -area(i, j);
    }
  return roughflow::group_exp(a, area);
}

double flat_gap(const GroupElement& g, const GroupElement& h) {
  return std::max((g.level1() - h.level1()).lpNorm<Eigen::Infinity>(),
                  (g.level2() - h.level2()).lpNorm<Eigen::Infinity>());
}

double flat_norm(const GroupElement& g) {
  return std::max(g.level1().lpNorm<Eigen::Infinity>(),
                  g.level2().lpNorm<Eigen::Infinity>());
}

double prob_sup_abs_bm_below(double a, double horizon) {
  if (a <= 0.0) return 0.0;
  auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  const double s = a / std::sqrt(horizon);
  double total = 0.0;
  for (int k = -50; k <= 50; ++k) {
    const double term = Phi((2 * k + 1) * s) - Phi((2 * k - 1) * s);
    total += (k % 2 == 0 ? term : -term);
  }
  return total;
}

roughflow::SampledRoughPath random_polyline_lift(int d, int cells,
                                                 std::mt19937_64& rng,
                                                 double amplitude) {
  std::normal_distribution<double> gauss(0.0, amplitude);
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(cells + 1, d);
  std::vector<double> times(cells + 1);
  for (int j = 0; j <= cells; ++j) times[j] = static_cast<double>(j) / cells;
  for (int j = 1; j <= cells; ++j)
    for (int i = 0; i < d; ++i) pts(j, i) = pts(j - 1, i) + gauss(rng);
  return roughflow::lift_piecewise_linear(pts, times);
}

}  // namespace testsupport
