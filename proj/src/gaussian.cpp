#include "roughflow/gaussian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace roughflow {

FbmSampler::FbmSampler(int d, double hurst, int n, double horizon)
    : d_(d), hurst_(hurst), n_(n), horizon_(horizon) {
  if (d < 1) throw std::invalid_argument("FbmSampler: need d >= 1");
  if (!(hurst > 0.0) || hurst > 1.0)
    throw std::invalid_argument("FbmSampler: need hurst in (0, 1]");
  if (n < 1 || n > 4096)
    throw std::invalid_argument("FbmSampler: need 1 <= n <= 4096 (dense factorization)");
  if (!(horizon > 0.0)) throw std::invalid_argument("FbmSampler: need horizon > 0");

  // Stationary increment covariance on the uniform grid:
  // cov(j,k) = dt^{2H}/2 * (|j-k+1|^{2H} + |j-k-1|^{2H} - 2|j-k|^{2H}).
  const double dt = horizon / n;
  const double h2 = 2.0 * hurst;
  const double scale = 0.5 * std::pow(dt, h2);
  Eigen::MatrixXd cov(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k <= j; ++k) {
      const double lag = j - k;
      const double c = scale * (std::pow(lag + 1.0, h2) + std::pow(std::abs(lag - 1.0), h2) -
                                2.0 * std::pow(lag, h2));
      cov(j, k) = c;
      cov(k, j) = c;
    }

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    // Near-singular covariance (e.g. hurst -> 1): nudge the diagonal once.
    const double jitter = 1e-12 * cov.diagonal().mean();
    cov.diagonal().array() += jitter;
    llt.compute(cov);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error(
          "FbmSampler: increment covariance factorization failed; please report");
  }
  chol_ = llt.matrixL();
}

SampledRoughPath FbmSampler::sample(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Draw coordinate-major so adding coordinates never reshuffles earlier ones.
  Eigen::MatrixXd noise(n_, d_);
  for (int c = 0; c < d_; ++c)
    for (int r = 0; r < n_; ++r) noise(r, c) = gauss(rng);

  Eigen::MatrixXd increments = chol_ * noise;  // n x d
  Eigen::MatrixXd points(n_ + 1, d_);
  points.row(0).setZero();
  for (int r = 0; r < n_; ++r) points.row(r + 1) = points.row(r) + increments.row(r);

  std::vector<double> times(n_ + 1);
  for (int k = 0; k <= n_; ++k) times[k] = horizon_ * k / n_;
  times[n_] = horizon_;
  return lift_piecewise_linear(points, times);
}

SampledRoughPath sample_fbm(const GaussianDriverSpec& spec) {
  FbmSampler sampler(spec.d, spec.hurst, spec.n, spec.horizon);
  return sampler.sample(spec.seed);
}

}  // namespace roughflow
