#include "roughflow/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roughflow {

namespace {

// Per-point data the increment distance needs: level-1 value and the
// antisymmetric part of level-2. The homogeneous distance between grid
// increments only sees these, so DP inner loops run alloc-free on them.
struct MarkedPoints {
  std::vector<Eigen::VectorXd> a;
  std::vector<Eigen::MatrixXd> anti;

  void append(const GroupElement& g) {
    a.push_back(g.level1());
    anti.push_back(0.5 * (g.level2() - g.level2().transpose()));
  }
  int size() const { return static_cast<int>(a.size()); }
};

// homogeneous_norm of the increment between marked points i and j.
double increment_distance(const MarkedPoints& m, int i, int j) {
  const Eigen::VectorXd& ai = m.a[i];
  const Eigen::VectorXd& aj = m.a[j];
  const int d = static_cast<int>(ai.size());
  double lvl1_sq = 0.0;
  for (int r = 0; r < d; ++r) {
    const double v = aj[r] - ai[r];
    lvl1_sq += v * v;
  }
  double anti_sq = 0.0;
  const Eigen::MatrixXd& Ai = m.anti[i];
  const Eigen::MatrixXd& Aj = m.anti[j];
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const double v = Aj(r, c) - Ai(r, c) - 0.5 * (ai[r] * aj[c] - aj[r] * ai[c]);
      anti_sq += v * v;
    }
  return std::max(std::sqrt(lvl1_sq), std::sqrt(2.0 * std::sqrt(anti_sq)));
}

// Supremum of sum dist(i,j)^p over increasing chains through all marked
// points. Chains containing both endpoints dominate (distances are >= 0),
// so the answer is the DP value at the last point.
double pvar_power_dp(const MarkedPoints& m, double p) {
  const int n = m.size();
  if (n < 2) return 0.0;
  std::vector<double> best(n, 0.0);
  for (int j = 1; j < n; ++j) {
    double bj = 0.0;
    for (int i = 0; i < j; ++i) {
      const double cand = best[i] + std::pow(increment_distance(m, i, j), p);
      if (cand > bj) bj = cand;
    }
    best[j] = bj;
  }
  return best[n - 1];
}

// Grid index range of x inside [s, t] (inclusive, with grid tolerance).
std::pair<int, int> index_range(const SampledRoughPath& x, double s, double t) {
  const double tol = 1e-9 * std::max(1.0, x.horizon());
  const auto& times = x.times();
  auto lo = std::lower_bound(times.begin(), times.end(), s - tol);
  auto hi = std::upper_bound(times.begin(), times.end(), t + tol);
  return {static_cast<int>(lo - times.begin()), static_cast<int>(hi - times.begin()) - 1};
}

class HolderControl final : public Control::Impl {
 public:
  HolderControl(double K, double p, double horizon)
      : scale_(std::pow(K, p)), horizon_(horizon) {
    if (!(K >= 0.0) || !(p >= 1.0) || !(horizon > 0.0))
      throw std::invalid_argument("Control::holder: need K >= 0, p >= 1, horizon > 0");
  }
  double eval(double s, double t) const override { return scale_ * (t - s); }
  double horizon() const override { return horizon_; }

 private:
  double scale_;
  double horizon_;
};

class PvarControl final : public Control::Impl {
 public:
  PvarControl(const SampledRoughPath& x, double p)
      : x_(std::make_shared<SampledRoughPath>(x)), p_(p) {
    if (!(p >= 1.0)) throw std::invalid_argument("Control::pvar_of_path: need p >= 1");
  }

  double eval(double s, double t) const override {
    auto [lo, hi] = index_range(*x_, s, t);
    MarkedPoints m;
    for (int k = lo; k <= hi; ++k) m.append(x_->value(k));
    return pvar_power_dp(m, p_);
  }

  double horizon() const override { return x_->horizon(); }

  class PvarScanner final : public Control::Scanner {
   public:
    PvarScanner(std::shared_ptr<const SampledRoughPath> x, double p, double anchor)
        : x_(std::move(x)), p_(p) {
      next_ = index_range(*x_, anchor, x_->horizon()).first;
    }
    double advance(double t) override {
      const auto& times = x_->times();
      const double tol = 1e-9 * std::max(1.0, x_->horizon());
      while (next_ < x_->size() && times[next_] <= t + tol) {
        m_.append(x_->value(next_));
        const int j = m_.size() - 1;
        double bj = 0.0;
        for (int i = 0; i < j; ++i) {
          const double cand = best_[i] + std::pow(increment_distance(m_, i, j), p_);
          if (cand > bj) bj = cand;
        }
        best_.push_back(bj);
        ++next_;
      }
      return best_.empty() ? 0.0 : best_.back();
    }

   private:
    std::shared_ptr<const SampledRoughPath> x_;
    double p_;
    int next_;
    MarkedPoints m_;
    std::vector<double> best_;
  };

  std::unique_ptr<Control::Scanner> scanner(double anchor) const override {
    return std::make_unique<PvarScanner>(x_, p_, anchor);
  }

 private:
  std::shared_ptr<const SampledRoughPath> x_;
  double p_;
};

class SumControl final : public Control::Impl {
 public:
  SumControl(Control a, Control b) : a_(std::move(a)), b_(std::move(b)) {
    if (std::abs(a_.horizon() - b_.horizon()) >
        1e-9 * std::max(1.0, std::max(a_.horizon(), b_.horizon())))
      throw std::invalid_argument("Control::sum: horizons differ");
  }
  double eval(double s, double t) const override { return a_(s, t) + b_(s, t); }
  double horizon() const override { return a_.horizon(); }

  class SumScanner final : public Control::Scanner {
   public:
    SumScanner(std::unique_ptr<Scanner> a, std::unique_ptr<Scanner> b)
        : a_(std::move(a)), b_(std::move(b)) {}
    double advance(double t) override { return a_->advance(t) + b_->advance(t); }

   private:
    std::unique_ptr<Scanner> a_, b_;
  };

  std::unique_ptr<Control::Scanner> scanner(double anchor) const override {
    return std::make_unique<SumScanner>(a_.scanner(anchor), b_.scanner(anchor));
  }

 private:
  Control a_, b_;
};

// Fallback scanner for controls without an incremental form.
class EvalScanner final : public Control::Scanner {
 public:
  EvalScanner(const Control::Impl* impl, double anchor) : impl_(impl), anchor_(anchor) {}
  double advance(double t) override { return impl_->eval(anchor_, t); }

 private:
  const Control::Impl* impl_;
  double anchor_;
};

}  // namespace

std::unique_ptr<Control::Scanner> Control::Impl::scanner(double anchor) const {
  return std::make_unique<EvalScanner>(this, anchor);
}

double Control::operator()(double s, double t) const {
  const double tol = 1e-9 * std::max(1.0, horizon());
  if (!(s <= t + tol)) throw std::domain_error("Control: need s <= t");
  if (s < -tol || t > horizon() + tol)
    throw std::domain_error("Control: [s,t] outside [0, horizon]");
  return impl_->eval(std::max(s, 0.0), std::min(t, horizon()));
}

Control Control::holder(double K, double p, double horizon) {
  return Control(std::make_shared<HolderControl>(K, p, horizon));
}

Control Control::pvar_of_path(const SampledRoughPath& x, double p) {
  return Control(std::make_shared<PvarControl>(x, p));
}

Control Control::sum(Control a, Control b) {
  return Control(std::make_shared<SumControl>(std::move(a), std::move(b)));
}

double pvar_norm(const SampledRoughPath& x, double p, double s, double t) {
  if (!(p >= 1.0)) throw std::domain_error("pvar_norm: need p >= 1");
  const double tol = 1e-9 * std::max(1.0, x.horizon());
  if (s < -tol || t > x.horizon() + tol || s > t + tol)
    throw std::domain_error("pvar_norm: [s,t] outside the grid span");
  auto [lo, hi] = index_range(x, s, t);
  MarkedPoints m;
  for (int k = lo; k <= hi; ++k) m.append(x.value(k));
  return std::pow(pvar_power_dp(m, p), 1.0 / p);
}

double pvar_norm(const SampledRoughPath& x, double p) {
  return pvar_norm(x, p, 0.0, x.horizon());
}

double pvar_distance(const SampledRoughPath& x, const SampledRoughPath& y, double p) {
  if (!(p >= 1.0)) throw std::domain_error("pvar_distance: need p >= 1");
  if (x.size() != y.size() || x.dim() != y.dim())
    throw std::invalid_argument("pvar_distance: paths must share the grid (resample first)");
  const double tol = 1e-9 * std::max(1.0, std::max(x.horizon(), y.horizon()));
  for (int k = 0; k < x.size(); ++k)
    if (std::abs(x.times()[k] - y.times()[k]) > tol)
      throw std::invalid_argument("pvar_distance: paths must share the grid (resample first)");

  MarkedPoints mx, my;
  for (int k = 0; k < x.size(); ++k) {
    mx.append(x.value(k));
    my.append(y.value(k));
  }
  // DP over chains with weight = homogeneous distance between the two paths'
  // increments over the same chain link.
  const int n = mx.size();
  std::vector<double> best(n, 0.0);
  for (int j = 1; j < n; ++j) {
    double bj = 0.0;
    for (int i = 0; i < j; ++i) {
      // d(g, h) = N(g^{-1} h) with g, h the increments of x and y over [i, j].
      const Eigen::VectorXd ag = mx.a[j] - mx.a[i];
      const Eigen::VectorXd ah = my.a[j] - my.a[i];
      const Eigen::MatrixXd Ag =
          mx.anti[j] - mx.anti[i] -
          0.5 * (mx.a[i] * mx.a[j].transpose() - mx.a[j] * mx.a[i].transpose());
      const Eigen::MatrixXd Ah =
          my.anti[j] - my.anti[i] -
          0.5 * (my.a[i] * my.a[j].transpose() - my.a[j] * my.a[i].transpose());
      const Eigen::MatrixXd Adiff =
          Ah - Ag - 0.5 * (ag * ah.transpose() - ah * ag.transpose());
      const double dist =
          std::max((ah - ag).norm(), std::sqrt(2.0 * Adiff.norm()));
      const double cand = best[i] + std::pow(dist, p);
      if (cand > bj) bj = cand;
    }
    best[j] = bj;
  }
  return std::pow(best[n - 1], 1.0 / p);
}

double holder_norm(const SampledRoughPath& x, double p) {
  if (!(p >= 1.0)) throw std::domain_error("holder_norm: need p >= 1");
  if (x.size() < 2) throw std::domain_error("holder_norm: need at least 2 grid points");
  MarkedPoints m;
  for (int k = 0; k < x.size(); ++k) m.append(x.value(k));
  double sup = 0.0;
  for (int i = 0; i < m.size(); ++i)
    for (int j = i + 1; j < m.size(); ++j) {
      const double dt = x.times()[j] - x.times()[i];
      sup = std::max(sup, increment_distance(m, i, j) / std::pow(dt, 1.0 / p));
    }
  return sup;
}

GreedyPartition greedy_partition(const Control& omega, double delta,
                                 std::span<const double> grid) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::domain_error("greedy_partition: need delta > 0");
  if (grid.size() < 2) throw std::invalid_argument("greedy_partition: need >= 2 grid points");
  const double tol = 1e-9 * std::max(1.0, omega.horizon());
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    if (!(grid[k] < grid[k + 1]))
      throw std::invalid_argument("greedy_partition: grid must be strictly increasing");
  if (grid.front() < -tol || grid.back() > omega.horizon() + tol)
    throw std::invalid_argument("greedy_partition: grid outside the control's horizon");

  GreedyPartition part;
  part.delta = delta;
  part.times.push_back(grid.front());
  const std::size_t last = grid.size() - 1;
  std::size_t idx = 0;
  while (idx < last) {
    auto sc = omega.scanner(grid[idx]);
    std::size_t found = last;  // no budget hit: run to the horizon
    for (std::size_t j = idx + 1; j <= last; ++j) {
      if (sc->advance(grid[j]) >= delta) {
        found = j;
        break;
      }
    }
    part.times.push_back(grid[found]);
    idx = found;
  }
  part.n_delta = static_cast<int>(part.times.size()) - 2;
  if (part.n_delta < 0) part.n_delta = 0;
  return part;
}

}  // namespace roughflow
