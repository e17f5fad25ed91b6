#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "roughflow/bounds.hpp"
#include "roughflow/gaussian.hpp"
#include "support/oracles.hpp"

using namespace roughflow;

TEST_CASE("log-log fit recovers a power law exactly") {
  std::vector<double> xs, ys;
  for (double x : {1.0, 2.0, 5.0, 10.0, 40.0}) {
    xs.push_back(x);
    ys.push_back(3.0 * std::pow(x, 0.8));
  }
  auto fit = loglog_fit(xs, ys);
  CHECK(fit.slope == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.stderr_slope < 1e-12);
}

TEST_CASE("log-log fit skips nonpositive pairs and wants two points") {
  auto fit = loglog_fit({1.0, 0.0, 4.0}, {2.0, 5.0, 8.0});
  CHECK(fit.slope == doctest::Approx(1.0));
  CHECK_THROWS(loglog_fit({1.0}, {2.0}));
  CHECK_THROWS(loglog_fit({-1.0, 0.0}, {1.0, 1.0}));
}

TEST_CASE("budget-1 interval count grows under dilation") {
  FbmSampler sampler(2, 0.45, 256, 1.0);
  auto x = sampler.sample(4);
  const double p = 1.0 / 0.45 + 0.5;
  const double base = n1_of_driver(x, p, 0.0, 1.0);
  const double blown = n1_of_driver(dilate(x, 4.0), p, 0.0, 1.0);
  CHECK(base >= 0.0);
  CHECK(blown >= base);
  CHECK(blown > 0.0);
}

TEST_CASE("sup-norm sweep produces finite ratios and slopes") {
  FbmSampler sampler(2, 0.5, 128, 1.0);
  auto x = sampler.sample(9);
  auto b = DriftField::cubic_inward(2);
  auto sigma = sin_rotation_fields();
  BoundSweep sweep;
  sweep.variable = SweepVariable::xi_norm;
  sweep.grid = {1.0, 2.0, 4.0};
  sweep.xi_direction = Eigen::Vector2d(1.0, 0.0);
  auto fit = verify_sup_bound(b, sigma, x, sweep);
  REQUIRE(fit.points.size() == 3);
  for (const auto& pt : fit.points) {
    CHECK(std::isfinite(pt.response));
    CHECK(pt.predictor > 0.0);
    CHECK(pt.n1 >= 0.0);
  }
  CHECK(fit.quantity == "sup_norm");
  CHECK(std::isfinite(fit.log_slope));
}

TEST_CASE("hoelder verifier is restricted to linear drifts") {
  FbmSampler sampler(2, 0.5, 64, 1.0);
  auto x = sampler.sample(2);
  BoundSweep sweep;
  sweep.grid = {1.0, 2.0};
  sweep.xi_direction = Eigen::Vector2d(1.0, 0.0);
  CHECK_THROWS_AS(verify_holder_bound(DriftField::cubic_inward(2),
                                      sin_rotation_fields(), x, sweep),
                  std::domain_error);
}

TEST_CASE("polyline refinement converges to the fine reference") {
  std::mt19937_64 rng(71);
  auto path = testsupport::random_smooth_polyline(2, 256, 0.8, rng);
  auto x = lift_piecewise_linear(path.points, path.times);
  auto b = DriftField::linear_matrix(0.3 * Eigen::MatrixXd::Identity(2, 2));
  auto sigma = sin_rotation_fields();
  Eigen::VectorXd xi(2);
  xi << 0.5, -0.2;
  FlowOptions opts;
  opts.solver.step_budget = 1e-3;
  auto report = refinement_consistency(b, sigma, x, xi, {16, 64}, opts);
  REQUIRE(report.levels.size() == 2);
  CHECK(report.distances[1] <= report.distances[0] * (1.0 + 1e-9));
  CHECK(report.final_relative < 1e-2);
}

TEST_CASE("refinement rejects levels that do not divide the reference grid") {
  std::mt19937_64 rng(72);
  auto path = testsupport::random_smooth_polyline(1, 64, 0.5, rng);
  auto x = lift_piecewise_linear(path.points, path.times);
  Eigen::VectorXd xi(1);
  xi << 0.1;
  CHECK_THROWS(refinement_consistency(DriftField::zero(1), scalar_sin_fields(), x, xi,
                                      {7, 64}));
  CHECK_THROWS(refinement_consistency(DriftField::zero(1), scalar_sin_fields(), x, xi,
                                      {32, 16}));
}
