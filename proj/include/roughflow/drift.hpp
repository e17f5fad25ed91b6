#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace roughflow {

enum class GrowthMode { linear, one_sided };

// Drift b: R^m -> R^m with declared growth constants.
//   linear:    |b(x)| <= kappa1 + kappa2 |x|        (flow in both directions)
//   one_sided: <b(x), x> <= C1 (1 + |x|^2), tangential part <= C2 (1 + |x|),
//              C3 = sup{|b(x)| : |x| <= 6}          (semiflow, forward only)
// local_lipschitz(R) bounds the Lipschitz constant on the ball of radius R.
class DriftField {
 public:
  using Eval = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using Lip = std::function<double(double)>;

  static DriftField linear(int m, Eval eval, double kappa1, double kappa2, Lip lip);
  static DriftField one_sided(int m, Eval eval, double C1, double C2, double C3,
                              Lip lip);

  static DriftField zero(int m);
  static DriftField linear_matrix(const Eigen::MatrixXd& A);
  static DriftField constant(const Eigen::VectorXd& v);
  // b(x) = x - |x|^2 x: inward cubic, radial, one-sided with C1 = 1, C2 = 0.
  static DriftField cubic_inward(int m);

  int m() const { return m_; }
  GrowthMode mode() const { return mode_; }
  bool is_zero() const { return is_zero_; }
  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
  double local_lipschitz(double R) const { return lip_(R); }

  // linear-mode constants (zero in one_sided mode)
  double kappa1() const { return kappa1_; }
  double kappa2() const { return kappa2_; }
  // one_sided-mode constants (zero in linear mode)
  double C1() const { return C1_; }
  double C2() const { return C2_; }
  double C3() const { return C3_; }

  // sup |b| over a dense sample of the ball of radius R.
  double sup_on_ball(double R, int samples = 4096) const;

 private:
  DriftField() = default;

  int m_ = 0;
  Eval eval_;
  Lip lip_;
  GrowthMode mode_ = GrowthMode::linear;
  bool is_zero_ = false;
  double kappa1_ = 0.0, kappa2_ = 0.0;
  double C1_ = 0.0, C2_ = 0.0, C3_ = 0.0;
};

struct RadialDecomposition {
  double radial = 0.0;            // <b(x), x> / |x|
  Eigen::VectorXd tangential;     // b(x) - radial * x / |x|
};

// At x = 0 the radial part is 0 and the tangential part is b(0).
RadialDecomposition radial_decompose(const DriftField& b, const Eigen::VectorXd& x);

struct GrowthEstimate {
  double C1_hat = 0.0;      // max <b,x> / (1 + |x|^2)
  double C2_hat = 0.0;      // max |tangential| / (1 + |x|)
  double kappa2_hat = 0.0;  // max |b| / |x| over the outer half of the ball
  double kappa1_hat = 0.0;  // max (|b| - kappa2_hat |x|)^+
  bool within_declared = true;
};

// Empirical growth constants over n quasi-uniform points in the ball of
// radius R; flags declared-constant violations (with 1% slack).
GrowthEstimate estimate_growth_constants(const DriftField& b, double R, int n,
                                         std::uint64_t seed = 14);

}  // namespace roughflow
