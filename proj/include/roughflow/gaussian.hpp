#pragma once

#include <cstdint>

#include "roughflow/path.hpp"

namespace roughflow {

// d independent fractional Brownian coordinates on a uniform grid over
// [0, horizon], sampled exactly from the increment covariance and lifted as a
// polyline. hurst in (0, 1]; keep hurst > 1/3 for a step-2 rough path of
// finite p-variation with p = 1/hurst + margin.
struct GaussianDriverSpec {
  int d = 1;
  double hurst = 0.5;
  int n = 256;  // number of increments; n <= 4096 (dense Cholesky)
  double horizon = 1.0;
  std::uint64_t seed = 0;
};

// Factorizes the increment covariance once; sample(seed) reuses the factor.
// Fixed seed gives bitwise-identical paths across runs.
class FbmSampler {
 public:
  FbmSampler(int d, double hurst, int n, double horizon);

  SampledRoughPath sample(std::uint64_t seed) const;

  int d() const { return d_; }
  double hurst() const { return hurst_; }
  double horizon() const { return horizon_; }
  // Variation scale of the driver: rho = 1 / (2 * hurst).
  double rho() const { return 1.0 / (2.0 * hurst_); }

 private:
  int d_;
  double hurst_;
  int n_;
  double horizon_;
  Eigen::MatrixXd chol_;  // lower-triangular factor of the increment covariance
};

SampledRoughPath sample_fbm(const GaussianDriverSpec& spec);

}  // namespace roughflow
