#include "roughflow/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace roughflow {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t row) {
  const char* s = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw std::runtime_error(path + ": unparseable numeric cell in data row " +
                             std::to_string(row));
  return v;
}

}  // namespace

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < table.header.size(); ++i)
    f << (i ? "," : "") << table.header[i];
  f << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("write_csv: row width differs from header: " + path);
    for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << fmt(row[i]);
    f << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split_line(line);
  std::size_t rowno = 0;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++rowno;
    const auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw std::runtime_error(path + ": data row " + std::to_string(rowno) +
                               " has the wrong number of columns");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, path, rowno));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_points_csv(const std::string& path, const std::vector<double>& times,
                      const Eigen::MatrixXd& points) {
  if (static_cast<Eigen::Index>(times.size()) != points.rows())
    throw std::invalid_argument("write_points_csv: times/points length mismatch");
  CsvTable table;
  table.header.push_back("t");
  for (Eigen::Index j = 0; j < points.cols(); ++j)
    table.header.push_back("x_" + std::to_string(j + 1));
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i]};
    for (Eigen::Index j = 0; j < points.cols(); ++j)
      row.push_back(points(static_cast<Eigen::Index>(i), j));
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

std::pair<std::vector<double>, Eigen::MatrixXd> read_points_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  if (table.header.empty() || table.header[0] != "t")
    throw std::runtime_error(path + ": first column must be t");
  const int d = static_cast<int>(table.header.size()) - 1;
  if (d < 1) throw std::runtime_error(path + ": no coordinate columns");
  std::vector<double> times;
  Eigen::MatrixXd points(table.rows.size(), d);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    times.push_back(table.rows[i][0]);
    for (int j = 0; j < d; ++j) points(static_cast<Eigen::Index>(i), j) = table.rows[i][j + 1];
  }
  return {std::move(times), std::move(points)};
}

void write_lift_csv(const std::string& path, const SampledRoughPath& x) {
  const int d = x.dim();
  CsvTable table;
  table.header.push_back("t");
  for (int j = 0; j < d; ++j) table.header.push_back("x_" + std::to_string(j + 1));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      table.header.push_back("xx_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  for (int k = 0; k < x.size(); ++k) {
    const GroupElement& g = x.value(k);
    std::vector<double> row{x.times()[k]};
    for (int j = 0; j < d; ++j) row.push_back(g.level1()[j]);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) row.push_back(g.level2()(i, j));
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

SampledRoughPath read_lift_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  const std::size_t ncol = table.header.size();
  // 1 + d + d^2 columns.
  int d = 0;
  while (1 + d + d * d < static_cast<int>(ncol)) ++d;
  if (d < 1 || 1 + d + d * d != static_cast<int>(ncol) || table.header[0] != "t")
    throw std::runtime_error(path + ": not a lifted-path table");
  std::vector<double> times;
  std::vector<GroupElement> values;
  for (const auto& row : table.rows) {
    times.push_back(row[0]);
    Eigen::VectorXd a(d);
    Eigen::MatrixXd B(d, d);
    for (int j = 0; j < d; ++j) a[j] = row[1 + j];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) B(i, j) = row[1 + d + i * d + j];
    values.emplace_back(a, B);
  }
  return SampledRoughPath(std::move(times), std::move(values));
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  if (traj.values.empty())
    throw std::invalid_argument("write_trajectory_csv: empty trajectory");
  const Eigen::Index m = traj.values.front().size();
  CsvTable table;
  table.header.push_back("t");
  for (Eigen::Index j = 0; j < m; ++j)
    table.header.push_back("y_" + std::to_string(j + 1));
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    for (Eigen::Index j = 0; j < m; ++j) row.push_back(traj.values[i][j]);
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

Trajectory read_trajectory_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  if (table.header.empty() || table.header[0] != "t")
    throw std::runtime_error(path + ": first column must be t");
  const int m = static_cast<int>(table.header.size()) - 1;
  if (m < 1) throw std::runtime_error(path + ": no state columns");
  Trajectory traj;
  for (const auto& row : table.rows) {
    traj.times.push_back(row[0]);
    Eigen::VectorXd y(m);
    for (int j = 0; j < m; ++j) y[j] = row[j + 1];
    traj.values.push_back(std::move(y));
  }
  return traj;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace roughflow
