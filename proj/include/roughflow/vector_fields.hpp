#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace roughflow {

// Driving vector fields sigma: R^m -> R^{m x d} (column i multiplies driver
// coordinate i). jac(y)[b] is the m x d matrix of partial derivatives with
// respect to y_b; hess, when present, gives second derivatives and lets the
// solver avoid finite differences in the level-2 coefficient derivative.
class VectorFields {
 public:
  using Eval = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
  using Jac = std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)>;
  using Hess =
      std::function<std::vector<std::vector<Eigen::MatrixXd>>(const Eigen::VectorXd&)>;

  // nu must dominate both |sigma| and |D sigma| (operator norms); checked at
  // construction over 1000 probe points in the box [-probe_radius, probe_radius]^m.
  VectorFields(int m, int d, Eval eval, Jac jac, double nu, double gamma_hint,
               std::optional<Hess> hess = std::nullopt, double probe_radius = 5.0);

  int m() const { return m_; }
  int d() const { return d_; }
  double nu() const { return nu_; }
  double gamma_hint() const { return gamma_hint_; }
  bool has_hess() const { return hess_.has_value(); }

  Eigen::MatrixXd eval(const Eigen::VectorXd& y) const;
  std::vector<Eigen::MatrixXd> jac(const Eigen::VectorXd& y) const;
  std::vector<std::vector<Eigen::MatrixXd>> hess(const Eigen::VectorXd& y) const;

 private:
  int m_, d_;
  Eval eval_;
  Jac jac_;
  std::optional<Hess> hess_;
  double nu_;
  double gamma_hint_;
};

// sigma column i = offset_i + amp_i * sin(<wave_i, y> + phase_i) * dir_i.
// All derivatives are closed-form, so presets built from this carry a hess.
struct TrigColumn {
  Eigen::VectorXd offset;  // size m
  Eigen::VectorXd dir;     // size m
  Eigen::VectorXd wave;    // size m
  double amp = 0.0;
  double phase = 0.0;
};

VectorFields trig_fields(int m, std::vector<TrigColumn> columns, double nu,
                         double gamma_hint = 3.0);

VectorFields zero_fields(int m, int d);
VectorFields constant_fields(const Eigen::MatrixXd& sigma);
// m = d = 1, sigma(y) = 2 + sin y.
VectorFields scalar_sin_fields();
// m = d = 2, coupled bounded trigonometric columns.
VectorFields sin_rotation_fields();

}  // namespace roughflow
