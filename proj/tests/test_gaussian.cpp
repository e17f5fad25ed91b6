#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "roughflow/gaussian.hpp"
#include "roughflow/tensor.hpp"

using namespace roughflow;

TEST_CASE("fixed seed reproduces the path, distinct seeds do not") {
  FbmSampler sampler(2, 0.4, 64, 1.0);
  auto a = sampler.sample(7);
  auto b = sampler.sample(7);
  auto c = sampler.sample(8);
  REQUIRE(a.size() == 65);
  double same = 0.0, other = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    same = std::max(same, (a.value(k).level1() - b.value(k).level1()).norm());
    other = std::max(other, (a.value(k).level1() - c.value(k).level1()).norm());
  }
  CHECK(same == 0.0);
  CHECK(other > 1e-3);
}

TEST_CASE("sampler accessors expose the driver scale") {
  FbmSampler sampler(3, 0.4, 32, 2.0);
  CHECK(sampler.d() == 3);
  CHECK(sampler.hurst() == 0.4);
  CHECK(sampler.horizon() == 2.0);
  CHECK(sampler.rho() == doctest::Approx(1.25));
}

TEST_CASE("samples start at the identity and are geometric lifts") {
  FbmSampler sampler(2, 0.35, 32, 1.0);
  auto x = sampler.sample(3);
  CHECK(homogeneous_norm(x.value(0)) == 0.0);
  for (int k = 0; k < x.size(); ++k) CHECK(is_geometric(x.value(k)));
  CHECK(x.times().front() == 0.0);
  CHECK(x.times().back() == doctest::Approx(1.0));
}

TEST_CASE("marginal variance follows the power law") {
  // Var X_t = t^{2H}; average over replicates at t = horizon.
  for (double hurst : {0.5, 0.75, 0.4}) {
    FbmSampler sampler(1, hurst, 16, 1.0);
    const int reps = 4000;
    double second = 0.0;
    for (int r = 0; r < reps; ++r) {
      auto x = sampler.sample(1000 + r);
      const double v = x.value(16).level1()[0];
      second += v * v;
    }
    second /= reps;
    // MC standard error of the second moment is about sqrt(2/reps) ~ 2.2%
    CHECK(second == doctest::Approx(1.0).epsilon(0.1));
  }
}

TEST_CASE("increment correlation has the fBm sign") {
  // Adjacent increments: positively correlated for H > 1/2, negative below,
  // and uncorrelated for Brownian motion.
  auto corr = [](double hurst) {
    FbmSampler sampler(1, hurst, 8, 1.0);
    const int reps = 6000;
    double cross = 0.0, var = 0.0;
    for (int r = 0; r < reps; ++r) {
      auto x = sampler.sample(50000 + r);
      const auto& v = x.value(4).level1();
      const double d1 = x.value(5).level1()[0] - v[0];
      const double d2 = x.value(6).level1()[0] - x.value(5).level1()[0];
      cross += d1 * d2;
      var += d1 * d1;
    }
    return cross / var;
  };
  const double theory_75 = 0.5 * (std::pow(2.0, 1.5) - 2.0);  // 2^{2H-1} - 1
  CHECK(corr(0.75) == doctest::Approx(theory_75).epsilon(0.25));
  CHECK(corr(0.4) < -0.05);
  CHECK(std::abs(corr(0.5)) < 0.05);
}

TEST_CASE("coordinates are independent") {
  FbmSampler sampler(2, 0.5, 8, 1.0);
  const int reps = 6000;
  double cross = 0.0, v0 = 0.0, v1 = 0.0;
  for (int r = 0; r < reps; ++r) {
    auto x = sampler.sample(90000 + r);
    const auto& a = x.value(8).level1();
    cross += a[0] * a[1];
    v0 += a[0] * a[0];
    v1 += a[1] * a[1];
  }
  CHECK(std::abs(cross / std::sqrt(v0 * v1)) < 0.05);
}

TEST_CASE("spec convenience wrapper matches the sampler") {
  GaussianDriverSpec spec;
  spec.d = 2;
  spec.hurst = 0.45;
  spec.n = 16;
  spec.horizon = 1.5;
  spec.seed = 12;
  auto x = sample_fbm(spec);
  auto y = FbmSampler(2, 0.45, 16, 1.5).sample(12);
  for (int k = 0; k < x.size(); ++k)
    CHECK((x.value(k).level1() - y.value(k).level1()).norm() == 0.0);
}

TEST_CASE("constructor rejects out-of-range parameters") {
  CHECK_THROWS(FbmSampler(0, 0.5, 16, 1.0));
  CHECK_THROWS(FbmSampler(1, 0.0, 16, 1.0));
  CHECK_THROWS(FbmSampler(1, 1.5, 16, 1.0));
  CHECK_THROWS(FbmSampler(1, 0.5, 0, 1.0));
  CHECK_THROWS(FbmSampler(1, 0.5, 5000, 1.0));
  CHECK_THROWS(FbmSampler(1, 0.5, 16, -1.0));
}
