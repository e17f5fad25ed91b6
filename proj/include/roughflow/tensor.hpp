#pragma once

#include <Eigen/Dense>

namespace roughflow {

// Point of the step-2 truncated tensor group over R^d: a level-1 vector plus a
// level-2 d-by-d matrix. Every element produced by the operations below keeps
// the geometric constraint  level2 + level2^T = level1 * level1^T  (checked by
// is_geometric, preserved exactly up to roundoff).
class GroupElement {
 public:
  GroupElement() = default;  // dimension-0 placeholder for containers
  explicit GroupElement(int dim);  // identity element
  // Validates shapes and finiteness; does not force the geometric constraint.
  GroupElement(Eigen::VectorXd level1, Eigen::MatrixXd level2);

  static GroupElement identity(int dim) { return GroupElement(dim); }

  int dim() const { return static_cast<int>(level1_.size()); }
  const Eigen::VectorXd& level1() const { return level1_; }
  const Eigen::MatrixXd& level2() const { return level2_; }

 private:
  Eigen::VectorXd level1_;
  Eigen::MatrixXd level2_;
};

// Group product: level2 picks up the cross term level1_g * level1_h^T.
GroupElement chen_mul(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

// Dilation: level1 scales by eps, level2 by eps^2.
GroupElement dilate(const GroupElement& g, double eps);

// max(|level1|_2, sqrt(2 * ||antisymmetric part of level2||_F)).
// Homogeneous under dilation, symmetric under inversion, subadditive.
double homogeneous_norm(const GroupElement& g);

// homogeneous_norm(g^{-1} h); a metric for the norm above.
double distance(const GroupElement& g, const GroupElement& h);

// ||level2 + level2^T - level1 level1^T||_max, relative to max(1, |level1|^2).
double geometric_defect(const GroupElement& g);
bool is_geometric(const GroupElement& g, double tol = 1e-9);

// exp/log between the group and its step-2 algebra. The log of a geometric
// element has antisymmetric level-2 part (the area); group_exp rebuilds the
// symmetric part from level1.
GroupElement group_exp(const Eigen::VectorXd& level1, const Eigen::MatrixXd& area);
Eigen::MatrixXd log_area(const GroupElement& g);

// exp(theta * log g): the group geodesic from identity (theta=0) to g (theta=1).
GroupElement interpolate(const GroupElement& g, double theta);

}  // namespace roughflow
