#include "roughflow/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughflow {

SampledRoughPath::SampledRoughPath(std::vector<double> times,
                                   std::vector<GroupElement> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size())
    throw std::invalid_argument("SampledRoughPath: times/values length mismatch");
  if (times_.size() < 2)
    throw std::invalid_argument("SampledRoughPath: need at least 2 grid points");
  if (std::abs(times_.front()) > 1e-12)
    throw std::invalid_argument("SampledRoughPath: grid must start at 0");
  for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
    if (!(times_[k] < times_[k + 1]))
      throw std::invalid_argument("SampledRoughPath: times must be strictly increasing");
  }
  const int d = values_.front().dim();
  for (const auto& v : values_) {
    if (v.dim() != d)
      throw std::invalid_argument("SampledRoughPath: inconsistent value dimensions");
  }
  time_tol_ = 1e-9 * std::max(1.0, times_.back());
}

int SampledRoughPath::cell_index(double t) const {
  if (t < times_.front() - time_tol_ || t > times_.back() + time_tol_)
    throw std::domain_error("SampledRoughPath: time outside grid span");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  int k = static_cast<int>(it - times_.begin()) - 1;
  return std::clamp(k, 0, size() - 2);
}

int SampledRoughPath::grid_index(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t - time_tol_);
  if (it != times_.end() && std::abs(*it - t) <= time_tol_)
    return static_cast<int>(it - times_.begin());
  return -1;
}

GroupElement SampledRoughPath::value_at(double t) const {
  const int g = grid_index(t);
  if (g >= 0) return values_[g];
  const int k = cell_index(t);
  const double theta = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return chen_mul(values_[k], interpolate(increment(k, k + 1), theta));
}

GroupElement SampledRoughPath::increment(int k, int l) const {
  return chen_mul(inverse(values_.at(k)), values_.at(l));
}

GroupElement SampledRoughPath::increment(double s, double t) const {
  return chen_mul(inverse(value_at(s)), value_at(t));
}

SampledRoughPath SampledRoughPath::resample(const std::vector<double>& new_times) const {
  std::vector<GroupElement> vals;
  vals.reserve(new_times.size());
  for (double t : new_times) vals.push_back(value_at(t));
  return SampledRoughPath(new_times, std::move(vals));
}

SampledRoughPath lift_piecewise_linear(const Eigen::MatrixXd& points,
                                       const std::vector<double>& times) {
  if (static_cast<std::size_t>(points.rows()) != times.size())
    throw std::invalid_argument("lift_piecewise_linear: points/times length mismatch");
  if (points.rows() < 2)
    throw std::invalid_argument("lift_piecewise_linear: need at least 2 points");
  if (!points.allFinite())
    throw std::invalid_argument("lift_piecewise_linear: points must be finite");
  const int d = static_cast<int>(points.cols());
  std::vector<GroupElement> values;
  values.reserve(times.size());
  values.push_back(GroupElement::identity(d));
  for (Eigen::Index k = 0; k + 1 < points.rows(); ++k) {
    const Eigen::VectorXd v = (points.row(k + 1) - points.row(k)).transpose();
    // A straight segment contributes (v, v v^T / 2).
    GroupElement seg(v, 0.5 * v * v.transpose());
    values.push_back(chen_mul(values.back(), seg));
  }
  return SampledRoughPath(times, std::move(values));
}

Eigen::MatrixXd level1_samples(const SampledRoughPath& x) {
  Eigen::MatrixXd out(x.size(), x.dim());
  for (int k = 0; k < x.size(); ++k) out.row(k) = x.value(k).level1().transpose();
  return out;
}

SampledRoughPath dilate(const SampledRoughPath& x, double eps) {
  std::vector<GroupElement> vals;
  vals.reserve(x.size());
  for (int k = 0; k < x.size(); ++k) vals.push_back(dilate(x.value(k), eps));
  return SampledRoughPath(x.times(), std::move(vals));
}

}  // namespace roughflow
