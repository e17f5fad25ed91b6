#pragma once

#include <vector>

#include <Eigen/Dense>

#include "roughflow/tensor.hpp"

namespace roughflow {

// Rough path sampled on a time grid: values[k] is the group element carrying
// the path from time 0 up to times[k] (values[0] = identity at times[0] = 0).
// Between grid points the path is the group geodesic of the cell increment,
// which is what value_at / increment interpolate.
class SampledRoughPath {
 public:
  SampledRoughPath(std::vector<double> times, std::vector<GroupElement> values);

  int size() const { return static_cast<int>(times_.size()); }
  int dim() const { return values_.front().dim(); }
  double horizon() const { return times_.back(); }
  const std::vector<double>& times() const { return times_; }
  const GroupElement& value(int k) const { return values_.at(k); }

  // Index k with times[k] <= t <= times[k+1] (t clamped-checked to the span).
  int cell_index(double t) const;
  // Grid index whose time equals t up to grid tolerance, or -1.
  int grid_index(double t) const;

  GroupElement value_at(double t) const;
  GroupElement increment(int k, int l) const;  // value(k)^{-1} value(l), l may be < k
  GroupElement increment(double s, double t) const;

  SampledRoughPath resample(const std::vector<double>& new_times) const;

 private:
  std::vector<double> times_;
  std::vector<GroupElement> values_;
  double time_tol_;
};

// Canonical step-2 lift of the piecewise-linear path through the given points.
// points is (n+1) x d, row k is the location at times[k].
SampledRoughPath lift_piecewise_linear(const Eigen::MatrixXd& points,
                                       const std::vector<double>& times);

// Level-1 samples of the path at its grid times, (n+1) x d.
Eigen::MatrixXd level1_samples(const SampledRoughPath& x);

SampledRoughPath dilate(const SampledRoughPath& x, double eps);

}  // namespace roughflow
