#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "roughflow/path.hpp"
#include "roughflow/tensor.hpp"
#include "support/oracles.hpp"

using namespace roughflow;
using testsupport::flat_gap;
using testsupport::flat_norm;
using testsupport::random_group_element;

TEST_CASE("chen product is associative and respects identity") {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 3; ++d) {
    for (int rep = 0; rep < 50; ++rep) {
      auto g = random_group_element(d, rng);
      auto h = random_group_element(d, rng);
      auto k = random_group_element(d, rng);
      auto lhs = chen_mul(chen_mul(g, h), k);
      auto rhs = chen_mul(g, chen_mul(h, k));
      // componentwise: the homogeneous distance square-roots level-2 noise
      CHECK(flat_gap(lhs, rhs) < 1e-12);
      CHECK(flat_gap(chen_mul(g, GroupElement::identity(d)), g) < 1e-14);
      CHECK(flat_gap(chen_mul(GroupElement::identity(d), g), g) < 1e-14);
    }
  }
}

TEST_CASE("inverse cancels on both sides") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    auto g = random_group_element(3, rng);
    CHECK(flat_norm(chen_mul(g, inverse(g))) < 1e-12);
    CHECK(flat_norm(chen_mul(inverse(g), g)) < 1e-12);
  }
}

TEST_CASE("products of geometric elements stay geometric") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    auto g = random_group_element(3, rng);
    auto h = random_group_element(3, rng);
    CHECK(is_geometric(g));
    CHECK(is_geometric(chen_mul(g, h)));
    CHECK(is_geometric(inverse(g)));
    CHECK(is_geometric(dilate(g, 0.37)));
  }
}

TEST_CASE("norm scales linearly under dilation") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 100; ++rep) {
    auto g = random_group_element(2, rng);
    const double n = homogeneous_norm(g);
    for (double eps : {0.25, 0.5, 2.0, -1.0, -3.5}) {
      CHECK(homogeneous_norm(dilate(g, eps)) ==
            doctest::Approx(std::abs(eps) * n).epsilon(1e-12));
    }
  }
}

TEST_CASE("norm is symmetric and subadditive") {
  std::mt19937_64 rng(15);
  for (int rep = 0; rep < 200; ++rep) {
    auto g = random_group_element(3, rng);
    auto h = random_group_element(3, rng);
    CHECK(homogeneous_norm(inverse(g)) == doctest::Approx(homogeneous_norm(g)));
    CHECK(homogeneous_norm(chen_mul(g, h)) <=
          homogeneous_norm(g) + homogeneous_norm(h) + 1e-12);
    CHECK(distance(g, h) == doctest::Approx(distance(h, g)));
  }
}

TEST_CASE("exp and log are mutually inverse") {
  std::mt19937_64 rng(16);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd a(3);
    for (int i = 0; i < 3; ++i) a[i] = gauss(rng);
    Eigen::MatrixXd area = Eigen::MatrixXd::Zero(3, 3);
    area(0, 1) = gauss(rng);
    area(1, 0) = -area(0, 1);
    area(0, 2) = gauss(rng);
    area(2, 0) = -area(0, 2);
    area(1, 2) = gauss(rng);
    area(2, 1) = -area(1, 2);
    auto g = group_exp(a, area);
    CHECK((g.level1() - a).norm() < 1e-14);
    CHECK((log_area(g) - area).norm() < 1e-14);
  }
}

TEST_CASE("geodesic interpolation matches group structure") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    auto g = random_group_element(3, rng);
    CHECK(homogeneous_norm(interpolate(g, 0.0)) < 1e-14);
    CHECK(flat_gap(interpolate(g, 1.0), g) < 1e-13);
    // pieces of one geodesic compose exactly
    CHECK(flat_gap(chen_mul(interpolate(g, 0.3), interpolate(g, 0.45)),
                   interpolate(g, 0.75)) < 1e-12);
  }
}

TEST_CASE("polyline lift satisfies the multiplicative increment property") {
  std::mt19937_64 rng(18);
  for (int rep = 0; rep < 20; ++rep) {
    auto x = testsupport::random_polyline_lift(3, 16, rng);
    for (int i : {0, 3, 7}) {
      for (int j : {8, 11}) {
        for (int k : {12, 16}) {
          auto direct = x.increment(i, k);
          auto split = chen_mul(x.increment(i, j), x.increment(j, k));
          CHECK(flat_gap(direct, split) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("lift level-2 antisymmetric part is the polyline signed area") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(9, 2);
  std::vector<double> times(9);
  for (int k = 0; k < 9; ++k) times[k] = k / 8.0;
  for (int k = 1; k < 9; ++k)
    for (int c = 0; c < 2; ++c) pts(k, c) = pts(k - 1, c) + gauss(rng);
  auto x = lift_piecewise_linear(pts, times);
  for (int i : {0, 2}) {
    for (int j : {5, 8}) {
      auto inc = x.increment(i, j);
      const double area = log_area(inc)(0, 1);
      CHECK(area == doctest::Approx(testsupport::polyline_levy_area(pts, i, j, 0, 1))
                        .epsilon(1e-10));
    }
  }
}

TEST_CASE("value_at interpolates along the cell geodesic") {
  std::mt19937_64 rng(20);
  auto x = testsupport::random_polyline_lift(2, 8, rng);
  const auto& t = x.times();
  const double mid = 0.5 * (t[3] + t[4]);
  auto left = chen_mul(inverse(x.value(3)), x.value_at(mid));
  auto right = chen_mul(inverse(x.value_at(mid)), x.value(4));
  CHECK(flat_gap(chen_mul(x.value(3), chen_mul(left, right)), x.value(4)) < 1e-12);
  CHECK(flat_gap(x.increment(t[3], mid), left) < 1e-13);
}

TEST_CASE("dilation of a lift scales levels homogeneously") {
  std::mt19937_64 rng(21);
  auto x = testsupport::random_polyline_lift(2, 10, rng);
  auto y = dilate(x, 0.5);
  for (int k = 0; k < x.size(); ++k) {
    CHECK((y.value(k).level1() - 0.5 * x.value(k).level1()).norm() < 1e-14);
    CHECK((y.value(k).level2() - 0.25 * x.value(k).level2()).norm() < 1e-14);
  }
}

TEST_CASE("resample onto the same grid is the identity") {
  std::mt19937_64 rng(22);
  auto x = testsupport::random_polyline_lift(2, 12, rng);
  auto y = x.resample(x.times());
  for (int k = 0; k < x.size(); ++k) CHECK(flat_gap(x.value(k), y.value(k)) < 1e-13);
}
