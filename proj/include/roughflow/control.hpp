#pragma once

#include <memory>
#include <span>
#include <vector>

#include "roughflow/path.hpp"

namespace roughflow {

// Superadditive control function omega(s,t) on the simplex 0 <= s <= t <= horizon.
// Value-semantic wrapper over an immutable implementation; Scanner supports the
// incremental left-anchored evaluations the greedy partition needs without
// re-running the p-variation DP from scratch at every candidate endpoint.
class Control {
 public:
  class Scanner {
   public:
    virtual ~Scanner() = default;
    // omega(anchor, t); t must be nondecreasing across calls.
    virtual double advance(double t) = 0;
  };

  class Impl {
   public:
    virtual ~Impl() = default;
    virtual double eval(double s, double t) const = 0;
    virtual double horizon() const = 0;
    virtual std::unique_ptr<Scanner> scanner(double anchor) const;
  };

  explicit Control(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  double operator()(double s, double t) const;
  double horizon() const { return impl_->horizon(); }
  std::unique_ptr<Scanner> scanner(double anchor) const { return impl_->scanner(anchor); }

  // omega(s,t) = K^p * (t - s): the control of a path with 1/p-Hoelder norm K.
  static Control holder(double K, double p, double horizon);
  // omega(s,t) = ||x||^p_{p-var;[s,t]} over the path's grid points inside [s,t].
  static Control pvar_of_path(const SampledRoughPath& x, double p);
  static Control sum(Control a, Control b);

 private:
  std::shared_ptr<const Impl> impl_;
};

// p-variation norm over grid points inside [s,t]: exact supremum over all
// sub-partitions (dynamic program, O(k^2) in the number of grid points).
double pvar_norm(const SampledRoughPath& x, double p, double s, double t);
double pvar_norm(const SampledRoughPath& x, double p);

// p-variation of the increment mismatch of two paths on a common grid.
double pvar_distance(const SampledRoughPath& x, const SampledRoughPath& y, double p);

// sup over grid pairs u < v of distance(x_u, x_v) / (v-u)^{1/p}.
double holder_norm(const SampledRoughPath& x, double p);

struct GreedyPartition {
  double delta = 0.0;
  std::vector<double> times;  // tau_0 = grid.front(), ..., tau_K = grid.back()
  int n_delta = 0;            // number of partition points strictly before the horizon
};

// From each anchor, stop at the first grid point whose control budget reaches
// delta; the last interval may come in under budget. Guarantees
// delta * n_delta <= omega(grid.front(), grid.back()) by superadditivity.
GreedyPartition greedy_partition(const Control& omega, double delta,
                                 std::span<const double> grid);

}  // namespace roughflow
