#include "cusplab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cusplab {

namespace fs = std::filesystem;

namespace {

class CsvFile {
 public:
  explicit CsvFile(const fs::path& path) : path_(path), out_(path) {
    if (!out_) throw OutputError("cannot open " + path.string() + " for writing");
  }

  void header(std::initializer_list<const char*> names) {
    bool first = true;
    for (const char* n : names) {
      out_ << (first ? "" : ",") << n;
      first = false;
    }
    out_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << format_double(v);
      first = false;
    }
    out_ << '\n';
  }

  std::ofstream& stream() { return out_; }

  void close() {
    out_.close();
    if (!out_) throw OutputError("failed writing " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw OutputError("failed writing " + path.string());
}

void make_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu.csv", index);
  return buf;
}

double run_max_sup_J(std::span<const DiagnosticsRecord> records) {
  double m = 0.0;
  for (const auto& r : records) {
    if (r.finite) m = std::max(m, r.sup_abs_J);
  }
  return m;
}

}  // namespace

void write_initial_csv(const fs::path& path, const State& initial, const LeslieMaterial& material,
                       const Grid& grid) {
  const std::vector<double> J = compute_J(initial, material, grid);
  CsvFile csv(path);
  csv.header({"x", "theta0", "theta1", "u0", "R0", "S0", "J0"});
  for (std::size_t i = 0; i < initial.size(); ++i) {
    csv.row({grid.x(i), initial.theta[i], initial.theta_t(i), initial.u[i], initial.R[i],
             initial.S[i], J[i]});
  }
  csv.close();
}

void write_snapshot_csv(const fs::path& path, const State& state, std::span<const double> J,
                        const LeslieMaterial& material, const Grid& grid) {
  CsvFile csv(path);
  csv.header({"x", "theta", "u", "R", "S", "J", "theta_x", "theta_t"});
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double theta_x = 0.5 * (state.R[i] - state.S[i]) / material.c(state.theta[i]);
    csv.row({grid.x(i), state.theta[i], state.u[i], state.R[i], state.S[i], J[i], theta_x,
             state.theta_t(i)});
  }
  csv.close();
}

void write_timeseries_csv(const fs::path& path, std::span<const DiagnosticsRecord> records) {
  CsvFile csv(path);
  csv.header({"t", "E", "D", "sup_abs_S", "sup_abs_R", "sup_abs_J", "xi", "S_on_xi",
              "tildeS_on_xi"});
  for (const auto& r : records) {
    csv.row({r.t, r.energy, r.dissipation, r.sup_abs_S, r.sup_abs_R, r.sup_abs_J, r.xi, r.S_on_xi,
             r.tildeS_on_xi});
  }
  csv.close();
}

std::string blowup_report_text(const RunConfig& config, const ScenarioOutcome& outcome) {
  const RunResult& res = outcome.result;
  const BlowupReport& rep = res.report;
  std::ostringstream out;
  auto kv = [&](const char* key, const std::string& value) { out << key << "=" << value << "\n"; };
  auto num = [&](const char* key, double v) { kv(key, format_double(v)); };
  auto flag = [&](const char* key, bool v) { kv(key, v ? "true" : "false"); };

  flag("detected", rep.detected);
  num("t0", rep.t0);
  num("T_bound", rep.T_bound);
  kv("trigger", to_string(rep.trigger));
  kv("expectation", to_string(config.expectation));
  flag("expectation_met", outcome.expectation_met);
  flag("reached_t_end", res.reached_t_end);
  num("t_final", res.final_state.t);
  kv("steps", std::to_string(res.steps));
  num("blowup_threshold", res.blowup_threshold);
  num("gradient_limit", 1.0 / (config.solver.gradient_resolution_factor * config.grid.dx()));
  flag("cusp_signature", rep.cusp_signature);
  num("theta_t_growth", rep.theta_t_growth);
  num("theta_x_growth", rep.theta_x_growth);
  kv("colocation_cells", rep.detected ? std::to_string(rep.colocation_cells) : "nan");
  num("S_growth", rep.S_growth);
  num("R_cap", rep.R_cap);
  num("max_sup_R", rep.max_sup_R);
  flag("R_bounded", rep.R_bounded);
  num("E0", res.initial.report.energy);
  num("sup_S0", res.initial.report.sup_S);
  num("sup_R0", res.initial.report.sup_R);
  num("sup_J0", res.initial.report.sup_J);
  num("S_origin", res.initial.report.S_origin);
  num("J_bound", res.initial.report.J_bound);
  num("max_sup_J", outcome.max_sup_J);
  num("amplitude", config.spec.amplitude);
  num("epsilon", config.spec.epsilon);
  kv("history", "timeseries.csv columns sup_abs_S, sup_abs_R");
  if (!res.trace_note.empty()) kv("trace_note", res.trace_note);
  return out.str();
}

ScenarioOutcome run_scenario(const RunConfig& config, fs::path directory) {
  if (directory.empty()) directory = config.output_dir;
  const fs::path snapshots = directory / "snapshots";
  make_directory(snapshots);
  write_text(directory / "resolved_config.txt", to_text(config));

  ScenarioOutcome outcome;
  outcome.directory = directory;
  const auto sink = [&](std::size_t index, const State& state, std::span<const double> J) {
    write_snapshot_csv(snapshots / snapshot_name(index), state, J, config.material, config.grid);
  };
  outcome.result = run(config.spec, config.material, config.grid, config.solver,
                       config.solver.snapshot_stride > 0 ? SnapshotSink(sink) : SnapshotSink());
  const RunResult& res = outcome.result;
  outcome.max_sup_J = run_max_sup_J(res.records);

  const bool detected = res.report.detected;
  outcome.expectation_met = detected == (config.expectation == Expectation::blowup);
  if (!detected) {
    outcome.exit_status = kCompleted;
  } else {
    outcome.exit_status = config.expectation == Expectation::blowup ? kExpectedBlowup : kError;
  }

  write_initial_csv(snapshots / "initial.csv", res.initial.state, config.material, config.grid);
  write_timeseries_csv(directory / "timeseries.csv", res.records);
  write_text(directory / "blowup_report.txt", blowup_report_text(config, outcome));
  return outcome;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope needs at least two paired values");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepResult epsilon_sweep(const RunConfig& config, const std::vector<double>& epsilons,
                          fs::path directory) {
  if (epsilons.size() < 3) throw std::invalid_argument("epsilon sweep needs at least 3 entries");
  for (std::size_t i = 1; i < epsilons.size(); ++i) {
    if (!(epsilons[i] < epsilons[i - 1])) {
      throw std::invalid_argument("epsilon sweep list must be strictly decreasing");
    }
  }
  if (directory.empty()) directory = config.output_dir;

  SweepResult out;
  for (double eps : epsilons) {
    RunConfig cfg = config;
    cfg.spec.epsilon = eps;
    check_hypotheses(cfg.spec, cfg.material);
    const ScenarioOutcome o = run_scenario(cfg, directory / ("eps_" + format_double(eps)));
    SweepRow row;
    row.epsilon = eps;
    row.amplitude = cfg.spec.amplitude;
    row.E0 = o.result.initial.report.energy;
    row.max_sup_J = o.max_sup_J;
    row.detected = o.result.report.detected;
    row.t0 = o.result.report.t0;
    row.max_sup_R = o.result.report.max_sup_R;
    out.rows.push_back(row);
  }

  std::vector<double> eps, e0, sj;
  for (const auto& r : out.rows) {
    eps.push_back(r.epsilon);
    e0.push_back(r.E0);
    sj.push_back(r.max_sup_J);
  }
  out.E0_slope = loglog_slope(eps, e0);
  out.sup_J_slope = loglog_slope(eps, sj);
  out.sup_J_decreasing = true;
  for (std::size_t i = 1; i < sj.size(); ++i) {
    out.sup_J_decreasing = out.sup_J_decreasing && sj[i] < sj[i - 1];
  }

  make_directory(directory);
  CsvFile csv(directory / "sweep.csv");
  csv.header({"epsilon", "amplitude", "E0", "max_sup_J", "detected", "t0", "max_sup_R"});
  for (const auto& r : out.rows) {
    csv.row({r.epsilon, r.amplitude, r.E0, r.max_sup_J, r.detected ? 1.0 : 0.0, r.t0,
             r.max_sup_R});
  }
  csv.stream() << "slope,," << format_double(out.E0_slope) << ","
               << format_double(out.sup_J_slope) << ",,,\n";
  csv.close();
  return out;
}

double energy_budget_residual(std::span<const DiagnosticsRecord> records) {
  if (records.empty()) return 0.0;
  double dissipated = 0.0;
  for (std::size_t k = 1; k < records.size(); ++k) {
    dissipated += 0.5 * (records[k - 1].dissipation + records[k].dissipation) * records[k].dt;
  }
  return std::abs(records.back().energy - records.front().energy + dissipated);
}

RefinementResult refinement_study(const RunConfig& config, int levels, fs::path directory) {
  if (levels < 3) throw std::invalid_argument("refinement study needs at least 3 levels");
  if (config.spec.family != ProfileFamily::smooth) {
    throw std::invalid_argument("refinement study needs the smooth initial-data family");
  }

  RefinementResult out;
  std::vector<State> finals;
  for (int k = 0; k < levels; ++k) {
    RunConfig cfg = config;
    cfg.grid.nx = (config.grid.nx - 1) * (std::size_t{1} << k) + 1;
    cfg.solver.trace = false;
    const RunResult res = run(cfg.spec, cfg.material, cfg.grid, cfg.solver);
    if (!res.reached_t_end) {
      throw std::runtime_error("refinement level nx = " + std::to_string(cfg.grid.nx) +
                               " stopped before t_end");
    }
    RefinementLevel lvl;
    lvl.nx = cfg.grid.nx;
    lvl.dx = cfg.grid.dx();
    lvl.steps = res.steps;
    lvl.budget_residual = energy_budget_residual(res.records);
    out.levels.push_back(lvl);
    finals.push_back(res.final_state);
  }

  const double nan = std::nan("");
  for (std::size_t k = 0; k < out.levels.size(); ++k) {
    RefinementLevel& lvl = out.levels[k];
    lvl.diff_theta = lvl.diff_u = lvl.order_theta = lvl.order_u = lvl.budget_ratio = nan;
    if (k > 0) lvl.budget_ratio = out.levels[k - 1].budget_residual / lvl.budget_residual;
    if (k + 1 < out.levels.size()) {
      // node i of level k coincides with node 2i of level k + 1
      double dt = 0.0, du = 0.0;
      for (std::size_t i = 0; i < finals[k].size(); ++i) {
        dt = std::max(dt, std::abs(finals[k].theta[i] - finals[k + 1].theta[2 * i]));
        du = std::max(du, std::abs(finals[k].u[i] - finals[k + 1].u[2 * i]));
      }
      lvl.diff_theta = dt;
      lvl.diff_u = du;
    }
    if (k > 0 && k + 1 < out.levels.size()) {
      lvl.order_theta = std::log2(out.levels[k - 1].diff_theta / lvl.diff_theta);
      lvl.order_u = std::log2(out.levels[k - 1].diff_u / lvl.diff_u);
    }
  }

  out.min_order = std::numeric_limits<double>::infinity();
  for (const auto& lvl : out.levels) {
    if (!std::isnan(lvl.order_theta)) out.min_order = std::min(out.min_order, lvl.order_theta);
    if (!std::isnan(lvl.order_u)) out.min_order = std::min(out.min_order, lvl.order_u);
  }
  out.passed = out.min_order >= kMinRefinementOrder;

  if (!directory.empty()) {
    make_directory(directory);
    CsvFile csv(directory / "refinement.csv");
    csv.header({"nx", "dx", "steps", "diff_theta", "diff_u", "order_theta", "order_u",
                "budget_residual", "budget_ratio"});
    for (const auto& l : out.levels) {
      csv.row({static_cast<double>(l.nx), l.dx, static_cast<double>(l.steps), l.diff_theta,
               l.diff_u, l.order_theta, l.order_u, l.budget_residual, l.budget_ratio});
    }
    csv.close();
  }
  return out;
}

}  // namespace cusplab
