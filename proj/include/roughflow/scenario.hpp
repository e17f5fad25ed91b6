#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roughflow/drift.hpp"
#include "roughflow/flow.hpp"
#include "roughflow/gaussian.hpp"
#include "roughflow/vector_fields.hpp"

namespace roughflow {

// Raised on malformed configuration; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundsJob {
  std::string quantity = "sup";     // sup | pvar | holder | refinement
  std::string variable = "xi_norm"; // xi_norm | n1 | horizon | eps
  std::vector<double> grid;         // sweep grid, or level list for refinement
  Eigen::VectorXd direction;        // xi sweeps; defaults to the first axis
  Eigen::VectorXd base_xi;          // other sweeps; defaults to the origin
};

struct ScenarioConfig {
  std::optional<GaussianDriverSpec> gaussian;  // exclusive with driver_file
  std::string driver_file;

  std::string sigma_preset = "zero_fields";
  int sigma_m = 1;                  // zero_fields output dimension
  Eigen::MatrixXd sigma_matrix;     // constant_fields

  std::string drift_preset = "zero";
  Eigen::MatrixXd drift_matrix;     // linear preset
  Eigen::VectorXd drift_vector;     // constant preset
  std::string mode;                 // resolved growth mode name

  std::vector<Eigen::VectorXd> initial_conditions;
  double horizon = 1.0;
  double p = -1.0;                  // <= 0: driver default (1/H + 0.5) or 2.5

  std::vector<std::uint64_t> seeds;
  int replicates = 0;               // tails
  std::vector<double> eps_grid;     // ldp
  double ldp_radius = 1.0;

  std::optional<BoundsJob> bounds;
};

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

// Materialize the configured pieces. Dimension or preset mismatches raise
// ConfigError naming the field.
VectorFields build_sigma(const ScenarioConfig& cfg, int driver_dim);
DriftField build_drift(const ScenarioConfig& cfg, int m);
double resolve_p(const ScenarioConfig& cfg);

}  // namespace roughflow
