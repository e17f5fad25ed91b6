#include "roughflow/experiments.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <thread>

#include "roughflow/io.hpp"

namespace roughflow {

namespace {

using nlohmann::json;

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& t : pool) t.join();
}

SampledRoughPath load_file_driver(const ScenarioConfig& cfg) {
  auto [times, points] = read_points_csv(cfg.driver_file);
  return lift_piecewise_linear(points, times);
}

double solve_horizon(const ScenarioConfig& cfg, const SampledRoughPath& x) {
  if (cfg.horizon <= 0.0) return x.horizon();
  if (cfg.horizon > x.horizon() * (1.0 + 1e-9))
    throw ConfigError("config field 'horizon' exceeds the driver's span");
  return std::min(cfg.horizon, x.horizon());
}

FlowOptions flow_options(const ScenarioConfig& cfg) {
  FlowOptions opts;
  opts.solver.p = resolve_p(cfg);
  return opts;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir);
}

json interval_json(const IntervalReport& r) {
  return json{{"lo", r.lo},
              {"hi", r.hi},
              {"omega", r.omega},
              {"max_jacobian_dev", r.max_jacobian_dev},
              {"pullback_one_var", r.pullback_one_var},
              {"ode_steps", r.ode_steps}};
}

double sup_gap_on_shared_times(const Trajectory& a, const Trajectory& b, double tol) {
  double gap = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    while (j + 1 < b.times.size() && b.times[j] < a.times[i] - tol) ++j;
    if (std::abs(b.times[j] - a.times[i]) > tol) continue;
    gap = std::max(gap, (a.values[i] - b.values[j]).norm());
  }
  return gap;
}

}  // namespace

RunSummary run_solve(const ScenarioConfig& cfg, const std::string& out_dir, int workers) {
  ensure_dir(out_dir);
  const std::optional<FbmSampler> sampler =
      cfg.gaussian ? std::optional<FbmSampler>(FbmSampler(
                         cfg.gaussian->d, cfg.gaussian->hurst, cfg.gaussian->n,
                         cfg.gaussian->horizon))
                   : std::nullopt;
  const std::optional<SampledRoughPath> file_driver =
      cfg.gaussian ? std::nullopt : std::optional<SampledRoughPath>(load_file_driver(cfg));

  const int nseeds = static_cast<int>(cfg.seeds.size());
  const int nxi = static_cast<int>(cfg.initial_conditions.size());
  const int nruns = nseeds * nxi;

  RunSummary summary;
  summary.attempted = nruns;
  std::vector<std::string> errors(nruns);
  std::vector<char> ok(nruns, 0);

  const FlowOptions opts = flow_options(cfg);
  parallel_for(nruns, workers, [&](int run) {
    const int si = run / nxi;
    const int xj = run % nxi;
    const std::uint64_t seed = cfg.seeds[si];
    try {
      const SampledRoughPath x =
          sampler ? sampler->sample(seed) : *file_driver;
      const double T = solve_horizon(cfg, x);
      const VectorFields sigma = build_sigma(cfg, x.dim());
      const DriftField drift = build_drift(cfg, sigma.m());
      const Eigen::VectorXd& xi = cfg.initial_conditions[xj];

      const FlowResult res = flow_with_drift(drift, sigma, x, 0.0, T, xi, opts);

      const std::string stem = out_dir + "/run_seed" + std::to_string(seed) +
                               "_xi" + std::to_string(xj);
      write_trajectory_csv(stem + ".csv", res.trajectory);

      json diag;
      diag["seed"] = seed;
      diag["xi_index"] = xj;
      diag["budget"] = res.budget;
      diag["partition"] = res.partition.times;
      diag["n_delta"] = res.partition.n_delta;
      diag["sup_norm"] = res.sup_norm;
      diag["fitted_sup_constant"] = fit_sup_constant(res.sup_norm, xi.norm(), T);
      diag["intervals"] = json::array();
      for (const auto& r : res.intervals) diag["intervals"].push_back(interval_json(r));
      write_text_file(stem + ".json", diag.dump(2) + "\n");
      ok[run] = 1;
    } catch (const std::exception& e) {
      errors[run] = "run seed=" + std::to_string(seed) + " xi=" + std::to_string(xj) +
                    ": " + e.what();
    }
  });

  for (int run = 0; run < nruns; ++run) {
    if (ok[run])
      ++summary.succeeded;
    else
      summary.failures.push_back(errors[run]);
  }
  return summary;
}

TailReport run_tails(const ScenarioConfig& cfg, const std::string& out_dir,
                     int replicates_override, int workers) {
  if (!cfg.gaussian)
    throw ConfigError("config field 'driver.type' must be \"fbm\" for tails");
  const int R = replicates_override > 0 ? replicates_override : cfg.replicates;
  if (R < 1000)
    throw ConfigError("config field 'replicates' must be >= 1000 for tails");
  ensure_dir(out_dir);

  const FbmSampler sampler(cfg.gaussian->d, cfg.gaussian->hurst, cfg.gaussian->n,
                           cfg.gaussian->horizon);
  const Eigen::VectorXd xi = cfg.initial_conditions.front();
  const FlowOptions opts = flow_options(cfg);

  // Materialize once to validate dimensions, then per-replicate runs only
  // depend on the sampled driver.
  {
    const SampledRoughPath probe = sampler.sample(cfg.seeds.front());
    const VectorFields sigma = build_sigma(cfg, probe.dim());
    build_drift(cfg, sigma.m());
    solve_horizon(cfg, probe);
  }

  std::vector<double> sups(R, std::numeric_limits<double>::quiet_NaN());
  const std::uint64_t seed0 = cfg.seeds.front();
  parallel_for(R, workers, [&](int k) {
    try {
      const SampledRoughPath x = sampler.sample(seed0 + static_cast<std::uint64_t>(k));
      const double T = solve_horizon(cfg, x);
      const VectorFields sigma = build_sigma(cfg, x.dim());
      const DriftField drift = build_drift(cfg, sigma.m());
      sups[k] = flow_with_drift(drift, sigma, x, 0.0, T, xi, opts).sup_norm;
    } catch (const std::exception&) {
      // left NaN; dropped below
    }
  });

  std::vector<double> clean;
  clean.reserve(R);
  for (double v : sups)
    if (std::isfinite(v)) clean.push_back(v);
  if (clean.size() < 100)
    throw std::runtime_error("run_tails: too many replicates failed");
  std::sort(clean.begin(), clean.end());

  TailReport report;
  report.replicates = static_cast<int>(clean.size());
  report.rho = sampler.rho();
  report.shape_floor = 2.0 / report.rho - 0.4;

  const int n = static_cast<int>(clean.size());
  report.radii = clean;
  report.survival.resize(n);
  // Median-rank plotting positions keep the top order statistic usable.
  for (int i = 0; i < n; ++i)
    report.survival[i] = 1.0 - (i + 1 - 0.3) / (n + 0.4);

  const double spread = clean.back() - clean.front();
  report.degenerate = spread <= 1e-9 * std::max(1.0, std::abs(clean.back()));

  if (!report.degenerate) {
    std::vector<double> xs, ys;
    for (int i = n - n / 10; i < n; ++i) {
      if (clean[i] <= 0.0) continue;
      xs.push_back(clean[i]);
      ys.push_back(-std::log(report.survival[i]));
    }
    const LineFit fit = loglog_fit(xs, ys);
    report.shape = fit.slope;
    report.shape_stderr = fit.stderr_slope;
  }

  CsvTable curve;
  curve.header = {"r", "survival"};
  for (int i = 0; i < n; ++i)
    curve.rows.push_back({report.radii[i], report.survival[i]});
  write_csv(out_dir + "/survival.csv", curve);

  json doc;
  doc["replicates"] = report.replicates;
  doc["rho"] = report.rho;
  doc["degenerate"] = report.degenerate;
  if (report.degenerate) doc["note"] = "deterministic";
  doc["shape"] = report.shape;
  doc["shape_stderr"] = report.shape_stderr;
  doc["shape_floor"] = report.shape_floor;
  write_text_file(out_dir + "/tails.json", doc.dump(2) + "\n");
  return report;
}

LdpReport run_ldp(const ScenarioConfig& cfg, const std::string& out_dir,
                  int replicates_override, int workers) {
  if (!cfg.gaussian)
    throw ConfigError("config field 'driver.type' must be \"fbm\" for ldp");
  if (cfg.eps_grid.empty()) throw ConfigError("config field 'ldp.eps' is missing");
  const int R = replicates_override > 0 ? replicates_override
                : cfg.replicates > 0    ? cfg.replicates
                                        : 0;
  if (R < 100) throw ConfigError("config field 'replicates' must be >= 100 for ldp");
  ensure_dir(out_dir);

  const FbmSampler sampler(cfg.gaussian->d, cfg.gaussian->hurst, cfg.gaussian->n,
                           cfg.gaussian->horizon);
  const Eigen::VectorXd xi = cfg.initial_conditions.front();
  const FlowOptions opts = flow_options(cfg);
  const double r = cfg.ldp_radius;

  // Noise-free baseline: same system driven by the zero path.
  const SampledRoughPath x0 = dilate(sampler.sample(cfg.seeds.front()), 0.0);
  const double T = solve_horizon(cfg, x0);
  const VectorFields sigma0 = build_sigma(cfg, x0.dim());
  const DriftField drift0 = build_drift(cfg, sigma0.m());
  const Trajectory base = flow_with_drift(drift0, sigma0, x0, 0.0, T, xi, opts).trajectory;

  const double tol = 1e-9 * std::max(1.0, x0.horizon());
  const std::uint64_t seed0 = cfg.seeds.front();

  LdpReport report;
  for (double eps : cfg.eps_grid) {
    std::atomic<int> hits{0}, valid{0};
    parallel_for(R, workers, [&](int k) {
      try {
        const SampledRoughPath x =
            dilate(sampler.sample(seed0 + static_cast<std::uint64_t>(k)), eps);
        const VectorFields sigma = build_sigma(cfg, x.dim());
        const DriftField drift = build_drift(cfg, sigma.m());
        const Trajectory y = flow_with_drift(drift, sigma, x, 0.0, T, xi, opts).trajectory;
        valid.fetch_add(1);
        if (sup_gap_on_shared_times(y, base, tol) > r) hits.fetch_add(1);
      } catch (const std::exception&) {
        // failed replicate: excluded from the estimate
      }
    });
    const int v = valid.load();
    if (v == 0) throw std::runtime_error("run_ldp: all replicates failed");
    const double p_hat = static_cast<double>(hits.load()) / v;
    report.eps.push_back(eps);
    report.p_hat.push_back(p_hat);
    if (p_hat == 0.0) {
      report.q.push_back(std::numeric_limits<double>::infinity());
      report.warnings.push_back("eps=" + std::to_string(eps) +
                                ": zero hits, q recorded as infinity and excluded");
    } else {
      report.q.push_back(-eps * eps * std::log(p_hat));
    }
  }

  std::vector<double> finite;
  for (double q : report.q)
    if (std::isfinite(q)) finite.push_back(q);
  if (finite.size() >= 3) {
    const auto last3 = std::vector<double>(finite.end() - 3, finite.end());
    const double lo = *std::min_element(last3.begin(), last3.end());
    const double hi = *std::max_element(last3.begin(), last3.end());
    const double mean = (last3[0] + last3[1] + last3[2]) / 3.0;
    report.spread = mean > 0.0 ? (hi - lo) / mean : (hi - lo);
    report.stabilized = report.spread <= 0.5;
  } else {
    report.spread = std::numeric_limits<double>::infinity();
    report.stabilized = false;
    report.warnings.push_back("fewer than three finite q values; no spread check");
  }

  CsvTable table;
  table.header = {"eps", "p_hat", "q"};
  for (std::size_t i = 0; i < report.eps.size(); ++i)
    table.rows.push_back({report.eps[i], report.p_hat[i], report.q[i]});
  write_csv(out_dir + "/ldp.csv", table);

  json doc;
  doc["replicates"] = R;
  doc["radius"] = r;
  doc["eps"] = report.eps;
  doc["p_hat"] = report.p_hat;
  doc["q"] = json::array();
  for (double q : report.q)
    doc["q"].push_back(std::isfinite(q) ? json(q) : json("inf"));
  doc["spread_last3"] = std::isfinite(report.spread) ? json(report.spread) : json("inf");
  doc["stabilized"] = report.stabilized;
  doc["warnings"] = report.warnings;
  write_text_file(out_dir + "/ldp.json", doc.dump(2) + "\n");
  return report;
}

BoundsArtifacts run_bounds(const ScenarioConfig& cfg, const std::string& out_dir) {
  if (!cfg.bounds) throw ConfigError("config field 'bounds' is missing");
  ensure_dir(out_dir);
  const BoundsJob& job = *cfg.bounds;

  const SampledRoughPath x =
      cfg.gaussian ? sample_fbm(*cfg.gaussian) : load_file_driver(cfg);
  const VectorFields sigma = build_sigma(cfg, x.dim());
  const DriftField drift = build_drift(cfg, sigma.m());
  const FlowOptions opts = flow_options(cfg);

  BoundsArtifacts out;
  if (job.quantity == "refinement") {
    out.is_refinement = true;
    std::vector<int> levels;
    for (double v : job.grid) {
      if (v != std::floor(v) || v < 2.0)
        throw ConfigError("config field 'bounds.grid' must hold integer levels >= 2");
      levels.push_back(static_cast<int>(v));
    }
    const Eigen::VectorXd xi = job.base_xi.size() > 0
                                   ? job.base_xi
                                   : Eigen::VectorXd::Zero(sigma.m());
    out.convergence = refinement_consistency(drift, sigma, x, xi, levels, opts);

    CsvTable table;
    table.header = {"level", "distance", "relative"};
    for (std::size_t i = 0; i < levels.size(); ++i)
      table.rows.push_back({static_cast<double>(levels[i]),
                            out.convergence.distances[i], out.convergence.relative[i]});
    write_csv(out_dir + "/refinement.csv", table);

    json doc;
    doc["levels"] = out.convergence.levels;
    doc["distances"] = out.convergence.distances;
    doc["relative"] = out.convergence.relative;
    doc["monotone"] = out.convergence.monotone;
    doc["final_relative"] = out.convergence.final_relative;
    write_text_file(out_dir + "/refinement.json", doc.dump(2) + "\n");
    return out;
  }

  BoundSweep sweep;
  sweep.grid = job.grid;
  sweep.variable = job.variable == "xi_norm"   ? SweepVariable::xi_norm
                   : job.variable == "n1"      ? SweepVariable::n1
                   : job.variable == "horizon" ? SweepVariable::horizon
                                               : SweepVariable::eps;
  sweep.xi_direction = job.direction;
  sweep.base_xi = job.base_xi;
  sweep.horizon = cfg.horizon;

  out.fit = job.quantity == "sup"
                ? verify_sup_bound(drift, sigma, x, sweep, opts)
            : job.quantity == "pvar"
                ? verify_pvar_bound(drift, sigma, x, sweep, opts)
                : verify_holder_bound(drift, sigma, x, sweep, opts);

  CsvTable table;
  table.header = {"sweep_value", "n1", "xi_norm", "horizon", "predictor", "response", "ratio"};
  for (const auto& pt : out.fit.points)
    table.rows.push_back({pt.sweep_value, pt.n1, pt.xi_norm, pt.horizon, pt.predictor,
                          pt.response, pt.ratio});
  write_csv(out_dir + "/sweep.csv", table);

  json doc;
  doc["quantity"] = out.fit.quantity;
  doc["variable"] = out.fit.variable;
  doc["log_slope"] = out.fit.log_slope;
  doc["log_intercept"] = out.fit.log_intercept;
  doc["slope_stderr"] = out.fit.slope_stderr;
  doc["max_ratio"] = out.fit.max_ratio;
  doc["bounded"] = out.fit.bounded;
  write_text_file(out_dir + "/sweep.json", doc.dump(2) + "\n");
  return out;
}

void run_lift(const std::string& points_csv, const std::string& out_csv) {
  auto [times, points] = read_points_csv(points_csv);
  const auto dir = std::filesystem::path(out_csv).parent_path();
  if (!dir.empty()) ensure_dir(dir.string());
  write_lift_csv(out_csv, lift_piecewise_linear(points, times));
}

double fit_sup_constant(double sup, double xi_norm, double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(sup))
    throw std::invalid_argument("fit_sup_constant: bad inputs");
  const auto rhs = [&](double c) {
    return (c * horizon + xi_norm) * std::exp(c * horizon);
  };
  if (rhs(0.0) >= sup) return 0.0;
  double hi = 1.0;
  while (rhs(hi) < sup) {
    hi *= 2.0;
    if (hi > 1e8) return std::numeric_limits<double>::infinity();
  }
  double lo = hi / 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (rhs(mid) >= sup ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace roughflow
