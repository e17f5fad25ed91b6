#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "roughflow/bounds.hpp"
#include "roughflow/drift.hpp"
#include "roughflow/experiments.hpp"
#include "roughflow/flow.hpp"
#include "roughflow/gaussian.hpp"
#include "roughflow/path.hpp"
#include "roughflow/tensor.hpp"

namespace py = pybind11;
using namespace roughflow;

namespace {

Eigen::MatrixXd stack_values(const Trajectory& traj) {
  if (traj.values.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd out(traj.values.size(), traj.values.front().size());
  for (std::size_t i = 0; i < traj.values.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = traj.values[i];
  return out;
}

py::dict trajectory_dict(const Trajectory& traj) {
  py::dict d;
  d["times"] = traj.times;
  d["values"] = stack_values(traj);
  return d;
}

VectorFields sigma_by_name(const std::string& preset, int m, int d,
                           const Eigen::MatrixXd& matrix) {
  if (preset == "scalar_sin") return scalar_sin_fields();
  if (preset == "sin_rotation") return sin_rotation_fields();
  if (preset == "zero_fields") return zero_fields(m, d);
  if (preset == "constant_fields") return constant_fields(matrix);
  throw std::invalid_argument("unknown sigma preset: " + preset);
}

DriftField drift_by_name(const std::string& preset, int m, const Eigen::MatrixXd& matrix,
                         const Eigen::VectorXd& vector) {
  if (preset == "zero") return DriftField::zero(m);
  if (preset == "cubic_inward") return DriftField::cubic_inward(m);
  if (preset == "linear") return DriftField::linear_matrix(matrix);
  if (preset == "constant") return DriftField::constant(vector);
  throw std::invalid_argument("unknown drift preset: " + preset);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "step-2 rough-path flows with unbounded drift";

  py::class_<GroupElement>(mod, "GroupElement")
      .def(py::init<Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("level1"),
           py::arg("level2"))
      .def_static("identity", &GroupElement::identity, py::arg("dim"))
      .def_property_readonly("level1", &GroupElement::level1)
      .def_property_readonly("level2", &GroupElement::level2)
      .def("dim", &GroupElement::dim)
      .def("__repr__", [](const GroupElement& g) {
        return "<GroupElement dim=" + std::to_string(g.dim()) + ">";
      });
  mod.def("chen_mul", &chen_mul);
  mod.def("inverse", &inverse);
  mod.def("dilate_element", [](const GroupElement& g, double eps) { return dilate(g, eps); });
  mod.def("homogeneous_norm", &homogeneous_norm);
  mod.def("distance", &distance);
  mod.def("is_geometric", &is_geometric, py::arg("g"), py::arg("tol") = 1e-9);

  py::class_<SampledRoughPath>(mod, "RoughPath")
      .def_property_readonly("times", &SampledRoughPath::times)
      .def_property_readonly("dim", &SampledRoughPath::dim)
      .def_property_readonly("horizon", &SampledRoughPath::horizon)
      .def("value", &SampledRoughPath::value, py::arg("k"))
      .def("level1", [](const SampledRoughPath& x) { return level1_samples(x); })
      .def("dilate", [](const SampledRoughPath& x, double eps) { return dilate(x, eps); })
      .def("__len__", &SampledRoughPath::size);

  mod.def(
      "lift_piecewise_linear",
      [](const Eigen::MatrixXd& points, const std::vector<double>& times) {
        return lift_piecewise_linear(points, times);
      },
      py::arg("points"), py::arg("times"));

  mod.def(
      "sample_fbm",
      [](int d, double hurst, int n, double horizon, std::uint64_t seed) {
        GaussianDriverSpec spec;
        spec.d = d;
        spec.hurst = hurst;
        spec.n = n;
        spec.horizon = horizon;
        spec.seed = seed;
        return sample_fbm(spec);
      },
      py::arg("d") = 1, py::arg("hurst") = 0.5, py::arg("n") = 256,
      py::arg("horizon") = 1.0, py::arg("seed") = 0);

  py::class_<VectorFields>(mod, "VectorFields")
      .def_property_readonly("m", &VectorFields::m)
      .def_property_readonly("d", &VectorFields::d)
      .def_property_readonly("nu", &VectorFields::nu)
      .def("eval", &VectorFields::eval, py::arg("y"));
  mod.def("sigma_preset", &sigma_by_name, py::arg("preset"), py::arg("m") = 1,
          py::arg("d") = 1, py::arg("matrix") = Eigen::MatrixXd());

  py::class_<DriftField>(mod, "DriftField")
      .def_property_readonly("m", &DriftField::m)
      .def_property_readonly("is_zero", &DriftField::is_zero)
      .def("eval", &DriftField::eval, py::arg("x"));
  mod.def("drift_preset", &drift_by_name, py::arg("preset"), py::arg("m") = 1,
          py::arg("matrix") = Eigen::MatrixXd(), py::arg("vector") = Eigen::VectorXd());

  mod.def(
      "solve_driftless",
      [](const VectorFields& sigma, const SampledRoughPath& x, const Eigen::VectorXd& xi,
         double s, double t, double p, double step_budget) {
        SolverOptions opts;
        opts.p = p;
        opts.step_budget = step_budget;
        return trajectory_dict(solve_rde(sigma, x, xi, s, t, opts));
      },
      py::arg("sigma"), py::arg("x"), py::arg("xi"), py::arg("s"), py::arg("t"),
      py::arg("p") = 2.5, py::arg("step_budget") = 0.1);

  mod.def(
      "flow",
      [](const DriftField& b, const VectorFields& sigma, const SampledRoughPath& x,
         double s, double t, const Eigen::VectorXd& xi, double p) {
        FlowOptions opts;
        opts.solver.p = p;
        const FlowResult res = flow_with_drift(b, sigma, x, s, t, xi, opts);
        py::dict out = trajectory_dict(res.trajectory);
        out["partition"] = res.partition.times;
        out["budget"] = res.budget;
        out["sup_norm"] = res.sup_norm;
        return out;
      },
      py::arg("b"), py::arg("sigma"), py::arg("x"), py::arg("s"), py::arg("t"),
      py::arg("xi"), py::arg("p") = 2.5);

  mod.def(
      "pvar_norm",
      [](const SampledRoughPath& x, double p) { return pvar_norm(x, p); },
      py::arg("x"), py::arg("p"));
  mod.def("fit_sup_constant", &fit_sup_constant, py::arg("sup"), py::arg("xi_norm"),
          py::arg("horizon"));

  py::register_exception<StiffnessError>(mod, "StiffnessError", PyExc_RuntimeError);
  py::register_exception<ExplosionError>(mod, "ExplosionError", PyExc_RuntimeError);
}
