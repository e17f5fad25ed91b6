#include "roughflow/drift.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace roughflow {

namespace {

void check_common(int m, const DriftField::Eval& eval, const DriftField::Lip& lip) {
  if (m < 1) throw std::invalid_argument("DriftField: need m >= 1");
  if (!eval) throw std::invalid_argument("DriftField: eval required");
  if (!lip) throw std::invalid_argument("DriftField: local_lipschitz required");
}

// Quasi-uniform ball point: Gaussian direction, radius R * u^{1/m}.
Eigen::VectorXd ball_point(int m, double R, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v[i] = gauss(rng);
  const double len = v.norm();
  if (len < 1e-300) return Eigen::VectorXd::Zero(m);
  return (R * std::pow(unif(rng), 1.0 / m) / len) * v;
}

}  // namespace

DriftField DriftField::linear(int m, Eval eval, double kappa1, double kappa2, Lip lip) {
  check_common(m, eval, lip);
  if (kappa1 < 0.0 || kappa2 < 0.0)
    throw std::invalid_argument("DriftField::linear: need kappa1, kappa2 >= 0");
  DriftField b;
  b.m_ = m;
  b.eval_ = std::move(eval);
  b.lip_ = std::move(lip);
  b.mode_ = GrowthMode::linear;
  b.kappa1_ = kappa1;
  b.kappa2_ = kappa2;
  return b;
}

DriftField DriftField::one_sided(int m, Eval eval, double C1, double C2, double C3,
                                 Lip lip) {
  check_common(m, eval, lip);
  if (C1 < 0.0 || C2 < 0.0 || C3 < 0.0)
    throw std::invalid_argument("DriftField::one_sided: need C1, C2, C3 >= 0");
  DriftField b;
  b.m_ = m;
  b.eval_ = std::move(eval);
  b.lip_ = std::move(lip);
  b.mode_ = GrowthMode::one_sided;
  b.C1_ = C1;
  b.C2_ = C2;
  b.C3_ = C3;
  return b;
}

DriftField DriftField::zero(int m) {
  DriftField b = linear(
      m, [m](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(m); }, 0.0, 0.0,
      [](double) { return 0.0; });
  b.is_zero_ = true;
  return b;
}

DriftField DriftField::linear_matrix(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() < 1)
    throw std::invalid_argument("DriftField::linear_matrix: A must be square");
  if (!A.allFinite())
    throw std::invalid_argument("DriftField::linear_matrix: A must be finite");
  const double opnorm = A.jacobiSvd().singularValues()(0);
  const Eigen::MatrixXd Ac = A;
  return linear(
      static_cast<int>(A.rows()), [Ac](const Eigen::VectorXd& x) { return Ac * x; },
      0.0, opnorm, [opnorm](double) { return opnorm; });
}

DriftField DriftField::constant(const Eigen::VectorXd& v) {
  if (v.size() < 1) throw std::invalid_argument("DriftField::constant: empty vector");
  if (!v.allFinite())
    throw std::invalid_argument("DriftField::constant: entries must be finite");
  const Eigen::VectorXd vc = v;
  return linear(
      static_cast<int>(v.size()), [vc](const Eigen::VectorXd&) { return vc; },
      v.norm(), 0.0, [](double) { return 0.0; });
}

DriftField DriftField::cubic_inward(int m) {
  // <b,x> = |x|^2 - |x|^4 <= 1 + |x|^2, radial so the tangential part vanishes;
  // sup over |x| <= 6 of |x - |x|^2 x| = |6 - 216| = 210.
  return one_sided(
      m, [](const Eigen::VectorXd& x) { return ((1.0 - x.squaredNorm()) * x).eval(); },
      1.0, 0.0, 210.0, [](double R) { return 1.0 + 3.0 * R * R; });
}

Eigen::VectorXd DriftField::eval(const Eigen::VectorXd& x) const {
  if (x.size() != m_) throw std::invalid_argument("DriftField: state size mismatch");
  return eval_(x);
}

double DriftField::sup_on_ball(double R, int samples) const {
  std::mt19937_64 rng(0xba11ULL);
  double sup = eval_(Eigen::VectorXd::Zero(m_)).norm();
  for (int i = 0; i < samples; ++i) {
    // Bias toward the boundary as well: alternate interior and surface points.
    Eigen::VectorXd x = ball_point(m_, R, rng);
    if (i % 2 == 0 && x.norm() > 1e-12) x *= R / x.norm();
    sup = std::max(sup, eval_(x).norm());
  }
  return sup;
}

RadialDecomposition radial_decompose(const DriftField& b, const Eigen::VectorXd& x) {
  const Eigen::VectorXd bx = b.eval(x);
  RadialDecomposition out;
  const double len = x.norm();
  if (len < 1e-300) {
    out.radial = 0.0;
    out.tangential = bx;
    return out;
  }
  out.radial = bx.dot(x) / len;
  out.tangential = bx - (out.radial / len) * x;
  return out;
}

GrowthEstimate estimate_growth_constants(const DriftField& b, double R, int n,
                                         std::uint64_t seed) {
  if (!(R > 0.0) || n < 1)
    throw std::invalid_argument("estimate_growth_constants: need R > 0, n >= 1");
  std::mt19937_64 rng(seed);
  GrowthEstimate est;
  std::vector<std::pair<double, double>> radius_mag;  // (|x|, |b(x)|)
  radius_mag.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = ball_point(b.m(), R, rng);
    const Eigen::VectorXd bx = b.eval(x);
    const double r = x.norm();
    est.C1_hat = std::max(est.C1_hat, bx.dot(x) / (1.0 + r * r));
    est.C2_hat =
        std::max(est.C2_hat, radial_decompose(b, x).tangential.norm() / (1.0 + r));
    radius_mag.emplace_back(r, bx.norm());
  }
  for (const auto& [r, mag] : radius_mag)
    if (r >= 0.5 * R) est.kappa2_hat = std::max(est.kappa2_hat, mag / r);
  for (const auto& [r, mag] : radius_mag)
    est.kappa1_hat = std::max(est.kappa1_hat, mag - est.kappa2_hat * r);

  const double slack = 1.01;
  if (b.mode() == GrowthMode::linear) {
    for (const auto& [r, mag] : radius_mag)
      if (mag > slack * (b.kappa1() + b.kappa2() * r)) est.within_declared = false;
  } else {
    if (est.C1_hat > slack * b.C1() || est.C2_hat > slack * b.C2() + 1e-12)
      est.within_declared = false;
  }
  return est;
}

}  // namespace roughflow
