#include "roughflow/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace roughflow {

GroupElement::GroupElement(int dim) {
  if (dim < 0) throw std::invalid_argument("GroupElement: dim must be >= 0");
  level1_ = Eigen::VectorXd::Zero(dim);
  level2_ = Eigen::MatrixXd::Zero(dim, dim);
}

GroupElement::GroupElement(Eigen::VectorXd level1, Eigen::MatrixXd level2)
    : level1_(std::move(level1)), level2_(std::move(level2)) {
  const auto d = level1_.size();
  if (level2_.rows() != d || level2_.cols() != d)
    throw std::invalid_argument("GroupElement: level2 must be dim x dim");
  if (!level1_.allFinite() || !level2_.allFinite())
    throw std::invalid_argument("GroupElement: entries must be finite");
}

static void check_same_dim(const GroupElement& g, const GroupElement& h) {
  if (g.dim() != h.dim())
    throw std::invalid_argument("GroupElement: dimension mismatch");
}

GroupElement chen_mul(const GroupElement& g, const GroupElement& h) {
  check_same_dim(g, h);
  return GroupElement(g.level1() + h.level1(),
                      g.level2() + h.level2() + g.level1() * h.level1().transpose());
}

GroupElement inverse(const GroupElement& g) {
  return GroupElement(-g.level1(), -g.level2() + g.level1() * g.level1().transpose());
}

GroupElement dilate(const GroupElement& g, double eps) {
  if (!std::isfinite(eps)) throw std::invalid_argument("dilate: eps must be finite");
  return GroupElement(eps * g.level1(), (eps * eps) * g.level2());
}

double homogeneous_norm(const GroupElement& g) {
  const double lvl1 = g.level1().norm();
  const double anti =
      0.5 * (g.level2() - g.level2().transpose()).norm();  // Frobenius
  return std::max(lvl1, std::sqrt(2.0 * anti));
}

double distance(const GroupElement& g, const GroupElement& h) {
  return homogeneous_norm(chen_mul(inverse(g), h));
}

double geometric_defect(const GroupElement& g) {
  const double scale = std::max(1.0, g.level1().squaredNorm());
  const double defect = (g.level2() + g.level2().transpose() -
                         g.level1() * g.level1().transpose())
                            .cwiseAbs()
                            .maxCoeff();
  return defect / scale;
}

bool is_geometric(const GroupElement& g, double tol) {
  if (g.dim() == 0) return true;
  return geometric_defect(g) <= tol;
}

GroupElement group_exp(const Eigen::VectorXd& level1, const Eigen::MatrixXd& area) {
  return GroupElement(level1, 0.5 * level1 * level1.transpose() + area);
}

Eigen::MatrixXd log_area(const GroupElement& g) {
  return g.level2() - 0.5 * g.level1() * g.level1().transpose();
}

GroupElement interpolate(const GroupElement& g, double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("interpolate: theta must be finite");
  return group_exp(theta * g.level1(), theta * log_area(g));
}

}  // namespace roughflow
