#include "roughflow/vector_fields.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

namespace roughflow {

namespace {

double operator_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
}

}  // namespace

VectorFields::VectorFields(int m, int d, Eval eval, Jac jac, double nu,
                           double gamma_hint, std::optional<Hess> hess,
                           double probe_radius)
    : m_(m), d_(d), eval_(std::move(eval)), jac_(std::move(jac)),
      hess_(std::move(hess)), nu_(nu), gamma_hint_(gamma_hint) {
  if (m < 1 || d < 1) throw std::invalid_argument("VectorFields: need m, d >= 1");
  if (!(nu > 0.0)) throw std::invalid_argument("VectorFields: need nu > 0");
  if (!(gamma_hint > 2.0))
    throw std::invalid_argument("VectorFields: need gamma_hint > 2");
  if (!eval_ || !jac_) throw std::invalid_argument("VectorFields: eval and jac required");

  // Declared-bound probe: nu must dominate |sigma| and |D sigma| on the box.
  std::mt19937_64 rng(0x5eedf1e1d5ULL);
  std::uniform_real_distribution<double> unif(-probe_radius, probe_radius);
  double worst = 0.0;
  for (int probe = 0; probe < 1000; ++probe) {
    Eigen::VectorXd y(m_);
    for (int i = 0; i < m_; ++i) y[i] = unif(rng);
    const Eigen::MatrixXd s = eval_(y);
    if (s.rows() != m_ || s.cols() != d_)
      throw std::invalid_argument("VectorFields: eval shape must be m x d");
    worst = std::max(worst, operator_norm(s));
    const auto js = jac_(y);
    if (static_cast<int>(js.size()) != m_)
      throw std::invalid_argument("VectorFields: jac must return m derivative slices");
    Eigen::MatrixXd stacked(m_ * d_, m_);
    for (int b = 0; b < m_; ++b) {
      if (js[b].rows() != m_ || js[b].cols() != d_)
        throw std::invalid_argument("VectorFields: jac slice shape must be m x d");
      stacked.col(b) = Eigen::Map<const Eigen::VectorXd>(js[b].data(), m_ * d_);
    }
    worst = std::max(worst, operator_norm(stacked));
  }
  if (worst > nu_ * (1.0 + 1e-9))
    throw std::invalid_argument("VectorFields: declared nu violated on the probe box");
}

Eigen::MatrixXd VectorFields::eval(const Eigen::VectorXd& y) const { return eval_(y); }

std::vector<Eigen::MatrixXd> VectorFields::jac(const Eigen::VectorXd& y) const {
  return jac_(y);
}

std::vector<std::vector<Eigen::MatrixXd>> VectorFields::hess(const Eigen::VectorXd& y) const {
  if (!hess_) throw std::logic_error("VectorFields: no hess provided");
  return (*hess_)(y);
}

VectorFields trig_fields(int m, std::vector<TrigColumn> columns, double nu,
                         double gamma_hint) {
  const int d = static_cast<int>(columns.size());
  for (const auto& c : columns) {
    if (c.offset.size() != m || c.dir.size() != m || c.wave.size() != m)
      throw std::invalid_argument("trig_fields: column vectors must have size m");
  }
  auto cols = std::make_shared<std::vector<TrigColumn>>(std::move(columns));

  auto eval = [m, d, cols](const Eigen::VectorXd& y) {
    Eigen::MatrixXd s(m, d);
    for (int i = 0; i < d; ++i) {
      const auto& c = (*cols)[i];
      s.col(i) = c.offset + c.amp * std::sin(c.wave.dot(y) + c.phase) * c.dir;
    }
    return s;
  };
  auto jac = [m, d, cols](const Eigen::VectorXd& y) {
    std::vector<Eigen::MatrixXd> js(m, Eigen::MatrixXd::Zero(m, d));
    for (int i = 0; i < d; ++i) {
      const auto& c = (*cols)[i];
      const double cs = c.amp * std::cos(c.wave.dot(y) + c.phase);
      for (int b = 0; b < m; ++b) js[b].col(i) = cs * c.wave[b] * c.dir;
    }
    return js;
  };
  auto hess = [m, d, cols](const Eigen::VectorXd& y) {
    std::vector<std::vector<Eigen::MatrixXd>> hs(
        m, std::vector<Eigen::MatrixXd>(m, Eigen::MatrixXd::Zero(m, d)));
    for (int i = 0; i < d; ++i) {
      const auto& c = (*cols)[i];
      const double sn = -c.amp * std::sin(c.wave.dot(y) + c.phase);
      for (int b = 0; b < m; ++b)
        for (int e = 0; e < m; ++e) hs[b][e].col(i) = sn * c.wave[b] * c.wave[e] * c.dir;
    }
    return hs;
  };
  return VectorFields(m, d, eval, jac, nu, gamma_hint, hess);
}

VectorFields zero_fields(int m, int d) {
  std::vector<TrigColumn> cols(d);
  for (auto& c : cols) {
    c.offset = Eigen::VectorXd::Zero(m);
    c.dir = Eigen::VectorXd::Zero(m);
    c.wave = Eigen::VectorXd::Zero(m);
  }
  return trig_fields(m, std::move(cols), 1e-30, 3.0);
}

VectorFields constant_fields(const Eigen::MatrixXd& sigma) {
  const int m = static_cast<int>(sigma.rows());
  const int d = static_cast<int>(sigma.cols());
  std::vector<TrigColumn> cols(d);
  for (int i = 0; i < d; ++i) {
    cols[i].offset = sigma.col(i);
    cols[i].dir = Eigen::VectorXd::Zero(m);
    cols[i].wave = Eigen::VectorXd::Zero(m);
  }
  const double nu = std::max(1e-12, sigma.norm());
  return trig_fields(m, std::move(cols), nu, 3.0);
}

VectorFields scalar_sin_fields() {
  TrigColumn c;
  c.offset = Eigen::VectorXd::Constant(1, 2.0);
  c.dir = Eigen::VectorXd::Constant(1, 1.0);
  c.wave = Eigen::VectorXd::Constant(1, 1.0);
  c.amp = 1.0;
  return trig_fields(1, {c}, 3.0);
}

VectorFields sin_rotation_fields() {
  TrigColumn c1, c2;
  c1.offset = (Eigen::VectorXd(2) << 1.0, 0.0).finished();
  c1.dir = (Eigen::VectorXd(2) << 0.6, 0.8).finished();
  c1.wave = (Eigen::VectorXd(2) << 0.0, 1.0).finished();
  c1.amp = 0.8;
  c2.offset = (Eigen::VectorXd(2) << 0.0, 1.0).finished();
  c2.dir = (Eigen::VectorXd(2) << 0.8, -0.6).finished();
  c2.wave = (Eigen::VectorXd(2) << 1.0, 0.0).finished();
  c2.amp = 0.8;
  c2.phase = 1.5707963267948966;  // pi/2: column 2 oscillates in quadrature
  return trig_fields(2, {c1, c2}, 2.5);
}

}  // namespace roughflow
