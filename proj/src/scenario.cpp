#include "roughflow/scenario.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace roughflow {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "' " + why);
}

const json& require(const json& obj, const std::string& field) {
  // Look up the last dotted component; the full name is for the message.
  const auto dot = field.rfind('.');
  const std::string key = dot == std::string::npos ? field : field.substr(dot + 1);
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("config field '" + field + "' is missing");
  return *it;
}

double as_num(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "must be a number");
  return j.get<double>();
}

long as_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) bad(field, "must be an integer");
  return j.get<long>();
}

std::string as_str(const json& j, const std::string& field) {
  if (!j.is_string()) bad(field, "must be a string");
  return j.get<std::string>();
}

Eigen::VectorXd as_vector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad(field, "must be a non-empty array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = as_num(j[i], field);
  if (!v.allFinite()) bad(field, "must be finite");
  return v;
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad(field, "must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) bad(field, "must contain non-empty rows");
  Eigen::MatrixXd m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) bad(field, "must be rectangular");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = as_num(j[i][k], field);
  }
  if (!m.allFinite()) bad(field, "must be finite");
  return m;
}

void parse_driver(const json& j, ScenarioConfig& cfg) {
  if (!j.is_object()) bad("driver", "must be an object");
  const std::string type = as_str(require(j, "driver.type"), "driver.type");
  if (type == "fbm") {
    GaussianDriverSpec spec;
    if (j.contains("dimension")) spec.d = static_cast<int>(as_int(j["dimension"], "driver.dimension"));
    if (j.contains("hurst")) spec.hurst = as_num(j["hurst"], "driver.hurst");
    if (j.contains("samples")) spec.n = static_cast<int>(as_int(j["samples"], "driver.samples"));
    if (j.contains("horizon")) spec.horizon = as_num(j["horizon"], "driver.horizon");
    if (spec.d < 1) bad("driver.dimension", "must be >= 1");
    if (!(spec.hurst > 1.0 / 3.0 && spec.hurst <= 1.0))
      bad("driver.hurst", "must lie in (1/3, 1]");
    if (spec.n < 2 || spec.n > 4096) bad("driver.samples", "must lie in [2, 4096]");
    if (!(spec.horizon > 0.0)) bad("driver.horizon", "must be positive");
    cfg.gaussian = spec;
  } else if (type == "file") {
    cfg.driver_file = as_str(require(j, "driver.path"), "driver.path");
    if (cfg.driver_file.empty()) bad("driver.path", "must be non-empty");
  } else {
    bad("driver.type", "must be \"fbm\" or \"file\"");
  }
}

void parse_sigma(const json& j, ScenarioConfig& cfg) {
  if (!j.is_object()) bad("sigma", "must be an object");
  cfg.sigma_preset = as_str(require(j, "sigma.preset"), "sigma.preset");
  if (cfg.sigma_preset == "scalar_sin") {
    cfg.sigma_m = 1;
  } else if (cfg.sigma_preset == "sin_rotation") {
    cfg.sigma_m = 2;
  } else if (cfg.sigma_preset == "zero_fields") {
    cfg.sigma_m = 1;
    if (j.contains("dimension_out"))
      cfg.sigma_m = static_cast<int>(as_int(j["dimension_out"], "sigma.dimension_out"));
    if (cfg.sigma_m < 1) bad("sigma.dimension_out", "must be >= 1");
  } else if (cfg.sigma_preset == "constant_fields") {
    cfg.sigma_matrix = as_matrix(require(j, "sigma.matrix"), "sigma.matrix");
    cfg.sigma_m = static_cast<int>(cfg.sigma_matrix.rows());
  } else {
    bad("sigma.preset", "must be one of scalar_sin, sin_rotation, zero_fields, constant_fields");
  }
}

void parse_drift(const json& j, ScenarioConfig& cfg) {
  if (!j.is_object()) bad("drift", "must be an object");
  cfg.drift_preset = as_str(require(j, "drift.preset"), "drift.preset");
  if (cfg.drift_preset == "linear") {
    cfg.drift_matrix = as_matrix(require(j, "drift.matrix"), "drift.matrix");
    if (cfg.drift_matrix.rows() != cfg.drift_matrix.cols())
      bad("drift.matrix", "must be square");
  } else if (cfg.drift_preset == "constant") {
    cfg.drift_vector = as_vector(require(j, "drift.vector"), "drift.vector");
  } else if (cfg.drift_preset != "zero" && cfg.drift_preset != "cubic_inward") {
    bad("drift.preset", "must be one of zero, linear, constant, cubic_inward");
  }
}

std::string natural_mode(const std::string& drift_preset) {
  return drift_preset == "cubic_inward" ? "one_sided" : "linear";
}

void parse_seeds(const json& j, ScenarioConfig& cfg) {
  cfg.seeds.clear();
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const long s = as_int(j[i], "seeds");
      if (s < 0) bad("seeds", "must be non-negative");
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
    if (cfg.seeds.empty()) bad("seeds", "must be non-empty");
  } else if (j.is_object()) {
    const long count = as_int(require(j, "seeds.count"), "seeds.count");
    long start = 0;
    if (j.contains("start")) start = as_int(j["start"], "seeds.start");
    if (count < 1) bad("seeds.count", "must be >= 1");
    if (start < 0) bad("seeds.start", "must be non-negative");
    for (long i = 0; i < count; ++i)
      cfg.seeds.push_back(static_cast<std::uint64_t>(start + i));
  } else {
    bad("seeds", "must be an array or {count, start}");
  }
}

void parse_bounds(const json& j, ScenarioConfig& cfg) {
  if (!j.is_object()) bad("bounds", "must be an object");
  BoundsJob job;
  job.quantity = as_str(require(j, "bounds.quantity"), "bounds.quantity");
  if (job.quantity != "sup" && job.quantity != "pvar" && job.quantity != "holder" &&
      job.quantity != "refinement")
    bad("bounds.quantity", "must be one of sup, pvar, holder, refinement");
  if (j.contains("variable")) {
    job.variable = as_str(j["variable"], "bounds.variable");
    if (job.variable != "xi_norm" && job.variable != "n1" &&
        job.variable != "horizon" && job.variable != "eps")
      bad("bounds.variable", "must be one of xi_norm, n1, horizon, eps");
  }
  const json& grid = require(j, "bounds.grid");
  if (!grid.is_array() || grid.size() < 2)
    bad("bounds.grid", "must be an array with at least two entries");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = as_num(grid[i], "bounds.grid");
    if (!(v > 0.0)) bad("bounds.grid", "must be positive");
    if (i > 0 && !(v > job.grid.back())) bad("bounds.grid", "must be increasing");
    job.grid.push_back(v);
  }
  if (j.contains("direction")) job.direction = as_vector(j["direction"], "bounds.direction");
  if (j.contains("base_xi")) job.base_xi = as_vector(j["base_xi"], "bounds.base_xi");
  cfg.bounds = std::move(job);
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  ScenarioConfig cfg;
  parse_driver(require(root, "driver"), cfg);
  if (root.contains("sigma")) parse_sigma(root["sigma"], cfg);
  if (root.contains("drift")) parse_drift(root["drift"], cfg);

  cfg.mode = natural_mode(cfg.drift_preset);
  if (root.contains("mode")) {
    const std::string mode = as_str(root["mode"], "mode");
    if (mode != "linear" && mode != "one_sided")
      bad("mode", "must be \"linear\" or \"one_sided\"");
    if (mode != cfg.mode)
      bad("mode", "is inconsistent with drift preset '" + cfg.drift_preset + "'");
  }

  if (root.contains("initial_conditions")) {
    const json& ics = root["initial_conditions"];
    if (!ics.is_array() || ics.empty())
      bad("initial_conditions", "must be a non-empty array of vectors");
    for (std::size_t i = 0; i < ics.size(); ++i) {
      Eigen::VectorXd xi = as_vector(ics[i], "initial_conditions");
      if (xi.size() != cfg.sigma_m)
        bad("initial_conditions", "entries must have length " + std::to_string(cfg.sigma_m));
      cfg.initial_conditions.push_back(std::move(xi));
    }
  } else {
    cfg.initial_conditions.push_back(Eigen::VectorXd::Zero(cfg.sigma_m));
  }

  if (root.contains("horizon")) {
    cfg.horizon = as_num(root["horizon"], "horizon");
    if (!(cfg.horizon > 0.0)) bad("horizon", "must be positive");
  } else {
    cfg.horizon = cfg.gaussian ? cfg.gaussian->horizon : -1.0;
  }

  if (root.contains("p")) {
    cfg.p = as_num(root["p"], "p");
    if (!(cfg.p > 2.0 && cfg.p < 3.0)) bad("p", "must lie in (2, 3)");
  }

  if (root.contains("seeds"))
    parse_seeds(root["seeds"], cfg);
  else
    cfg.seeds = {0};

  if (root.contains("replicates")) {
    const long r = as_int(root["replicates"], "replicates");
    if (r < 0) bad("replicates", "must be non-negative");
    cfg.replicates = static_cast<int>(r);
  }

  if (root.contains("ldp")) {
    const json& ldp = root["ldp"];
    if (!ldp.is_object()) bad("ldp", "must be an object");
    const json& eps = require(ldp, "ldp.eps");
    if (!eps.is_array() || eps.empty()) bad("ldp.eps", "must be a non-empty array");
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const double e = as_num(eps[i], "ldp.eps");
      if (!(e > 0.0)) bad("ldp.eps", "must be positive");
      cfg.eps_grid.push_back(e);
    }
    if (ldp.contains("radius")) {
      cfg.ldp_radius = as_num(ldp["radius"], "ldp.radius");
      if (cfg.ldp_radius < 0.0) bad("ldp.radius", "must be non-negative");
    }
  }

  if (root.contains("bounds")) parse_bounds(root["bounds"], cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

VectorFields build_sigma(const ScenarioConfig& cfg, int driver_dim) {
  if (cfg.sigma_preset == "scalar_sin") {
    if (driver_dim != 1) bad("sigma.preset", "(scalar_sin) needs a 1-dimensional driver");
    return scalar_sin_fields();
  }
  if (cfg.sigma_preset == "sin_rotation") {
    if (driver_dim != 2) bad("sigma.preset", "(sin_rotation) needs a 2-dimensional driver");
    return sin_rotation_fields();
  }
  if (cfg.sigma_preset == "constant_fields") {
    if (cfg.sigma_matrix.cols() != driver_dim)
      bad("sigma.matrix", "column count must equal the driver dimension");
    return constant_fields(cfg.sigma_matrix);
  }
  return zero_fields(cfg.sigma_m, driver_dim);
}

DriftField build_drift(const ScenarioConfig& cfg, int m) {
  if (cfg.drift_preset == "zero") return DriftField::zero(m);
  if (cfg.drift_preset == "cubic_inward") return DriftField::cubic_inward(m);
  if (cfg.drift_preset == "linear") {
    if (cfg.drift_matrix.rows() != m)
      bad("drift.matrix", "must be " + std::to_string(m) + "x" + std::to_string(m));
    return DriftField::linear_matrix(cfg.drift_matrix);
  }
  if (cfg.drift_vector.size() != m)
    bad("drift.vector", "must have length " + std::to_string(m));
  return DriftField::constant(cfg.drift_vector);
}

double resolve_p(const ScenarioConfig& cfg) {
  if (cfg.p > 0.0) return cfg.p;
  if (cfg.gaussian) return std::min(2.9, 1.0 / cfg.gaussian->hurst + 0.5);
  return 2.5;
}

}  // namespace roughflow
