#pragma once

#include <string>
#include <vector>

#include "roughflow/path.hpp"
#include "roughflow/rde.hpp"

namespace roughflow {

// All CSV emitters print doubles with %.17g so files round-trip bitwise
// through the importers.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // each row matches header size
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Level-1 points: header t,x_1..x_d.
void write_points_csv(const std::string& path, const std::vector<double>& times,
                      const Eigen::MatrixXd& points);
std::pair<std::vector<double>, Eigen::MatrixXd> read_points_csv(const std::string& path);

// Lifted path: header t,x_1..x_d followed by xx_i_j level-2 columns, row-major.
void write_lift_csv(const std::string& path, const SampledRoughPath& x);
SampledRoughPath read_lift_csv(const std::string& path);

// Trajectory: header t,y_1..y_m.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace roughflow
