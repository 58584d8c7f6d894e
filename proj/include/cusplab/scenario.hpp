#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cusplab/config.hpp"
#include "cusplab/solver.hpp"

namespace cusplab {

/// Thrown when an artifact cannot be written; the message names the path.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitStatus : int { kCompleted = 0, kError = 1, kExpectedBlowup = 2 };

struct ScenarioOutcome {
  RunResult result;
  double max_sup_J = 0.0;
  bool expectation_met = false;
  int exit_status = kError;
  std::filesystem::path directory;
};

/// CSV writers. Every floating value is written in shortest round-trip form.
void write_initial_csv(const std::filesystem::path& path, const State& initial,
                       const LeslieMaterial& material, const Grid& grid);
void write_snapshot_csv(const std::filesystem::path& path, const State& state,
                        std::span<const double> J, const LeslieMaterial& material,
                        const Grid& grid);
void write_timeseries_csv(const std::filesystem::path& path,
                          std::span<const DiagnosticsRecord> records);
std::string blowup_report_text(const RunConfig& config, const ScenarioOutcome& outcome);

/// Runs one configuration and writes resolved_config.txt, timeseries.csv,
/// snapshots/initial.csv, snapshots/NNNN.csv and blowup_report.txt into
/// `directory` (config.output_dir when empty).
ScenarioOutcome run_scenario(const RunConfig& config, std::filesystem::path directory = {});

struct SweepRow {
  double epsilon = 0.0;
  double amplitude = 0.0;
  double E0 = 0.0;
  double max_sup_J = 0.0;
  bool detected = false;
  double t0 = 0.0;
  double max_sup_R = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double E0_slope = 0.0;     ///< least-squares slope of log E(0) against log eps
  double sup_J_slope = 0.0;  ///< same for the run maximum of sup|J|
  bool sup_J_decreasing = false;
};

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Runs the config once per epsilon (strictly decreasing, at least three) with
/// the amplitude held at its resolved value; each run writes into
/// directory/eps_<value>/, the summary into directory/sweep.csv.
SweepResult epsilon_sweep(const RunConfig& config, const std::vector<double>& epsilons,
                          std::filesystem::path directory = {});

struct RefinementLevel {
  std::size_t nx = 0;
  double dx = 0.0;
  std::size_t steps = 0;
  double budget_residual = 0.0;  ///< |E(t) - E(0) + sum D dt| at t_end
  double diff_theta = 0.0;       ///< max-norm difference to the next finer level
  double diff_u = 0.0;
  double order_theta = 0.0;  ///< log2 of successive differences; NaN where undefined
  double order_u = 0.0;
  double budget_ratio = 0.0;  ///< residual of the previous level over this one
};

struct RefinementResult {
  std::vector<RefinementLevel> levels;
  double min_order = 0.0;
  bool passed = false;  ///< every observed order >= kMinRefinementOrder
};

inline constexpr double kMinRefinementOrder = 0.8;

/// Energy budget residual of a record stream: |E_n - E_0 + sum of trapezoid D dt|.
double energy_budget_residual(std::span<const DiagnosticsRecord> records);

/// Reruns the config with nx_k = (nx - 1) 2^k + 1 for k < levels (levels >= 3)
/// on the smooth family. Writes directory/refinement.csv when a directory is given.
RefinementResult refinement_study(const RunConfig& config, int levels,
                                  std::filesystem::path directory = {});

}  // namespace cusplab
