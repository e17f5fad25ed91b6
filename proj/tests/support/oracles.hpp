#pragma once

#include <functional>
#include <random>
#include <vector>

#include "roughflow/drift.hpp"
#include "roughflow/path.hpp"
#include "roughflow/vector_fields.hpp"

namespace testsupport {

// Exhaustive p-variation over every partition (endpoints fixed, all subsets
// of interior points). Only for small inputs; the reference the DP must match.
double brute_pvar(const std::vector<roughflow::GroupElement>& values, double p);

// Signed area swept by the chord-vs-path region between two polyline samples,
// per coordinate pair; the antisymmetric level-2 part of a canonical lift.
double polyline_levy_area(const Eigen::MatrixXd& points, int i, int j, int ci, int cj);

// Classical fixed-step RK4 for y' = b(y) + sigma(y) v(t) along a polyline
// driver, v its cellwise slope. b may be null. Integrates s -> t through the
// cells in between (either direction), steps_per_cell substeps each.
Eigen::VectorXd rk4_polyline_ode(const roughflow::VectorFields& sigma,
                                 const roughflow::DriftField* b,
                                 const Eigen::MatrixXd& points,
                                 const std::vector<double>& times,
                                 const Eigen::VectorXd& xi, double s, double t,
                                 int steps_per_cell);

// Same integrator over the whole span, recording the state at every grid time.
std::vector<Eigen::VectorXd> rk4_polyline_trajectory(
    const roughflow::VectorFields& sigma, const roughflow::DriftField* b,
    const Eigen::MatrixXd& points, const std::vector<double>& times,
    const Eigen::VectorXd& xi, int steps_per_cell);

Eigen::MatrixXd central_fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& y, double h);

// Random trigonometric polynomial sampled on a uniform grid: smooth driver
// with an easily refined polyline representation.
struct SmoothPolyline {
  std::vector<double> times;
  Eigen::MatrixXd points;
};
SmoothPolyline random_smooth_polyline(int d, int cells, double amplitude,
                                      std::mt19937_64& rng, double horizon = 1.0);

// Haar-ish random geometric element: group_exp of a Gaussian level-1 vector
// and Gaussian antisymmetric area.
roughflow::GroupElement random_group_element(int d, std::mt19937_64& rng,
                                             double scale = 1.0);

// Componentwise gap between two elements, max over both levels. The
// homogeneous distance takes a square root of the level-2 gap, which turns
// 1e-16 rounding noise into 1e-8; exactness claims must compare flat.
double flat_gap(const roughflow::GroupElement& g, const roughflow::GroupElement& h);
double flat_norm(const roughflow::GroupElement& g);

roughflow::SampledRoughPath random_polyline_lift(int d, int cells,
                                                 std::mt19937_64& rng,
                                                 double amplitude = 1.0);

// P(sup_{[0,T]} |W| <= a) for scalar Brownian motion, by the reflection
// series sum_k (-1)^k [Phi((2k+1)a/sqrt(T)) - Phi((2k-1)a/sqrt(T))].
double prob_sup_abs_bm_below(double a, double horizon);

}  // namespace testsupport
