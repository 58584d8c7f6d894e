#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cusplab/diagnostics.hpp"
#include "cusplab/grid.hpp"
#include "cusplab/initial_data.hpp"
#include "cusplab/material.hpp"

namespace cusplab {

struct SolverConfig {
  double cfl = 0.4;
  double t_end = 1.0;
  /// Absolute sup|S| trigger; when unset it is blowup_factor * sup|S(., 0)|.
  std::optional<double> blowup_threshold;
  double blowup_factor = 50.0;
  /// Stop once sup|theta_x| > 1/(K dx).
  double gradient_resolution_factor = 8.0;
  /// Implicit weight of the diffusion term: 0.5 is Crank-Nicolson, 1 is backward Euler.
  double heat_weight = 0.5;
  /// Steps between full-field snapshots; 0 disables them.
  std::size_t snapshot_stride = 0;
  bool trace = true;
  double trace_start_x = 0.0;
  std::size_t max_steps = 50'000'000;

  /// Throws std::invalid_argument on an out-of-range field.
  void validate() const;

  bool operator==(const SolverConfig&) const = default;
};

/// One coupled time stepper bound to a material and grid. Holds scratch
/// buffers, so an instance must not be shared between threads.
class Solver {
 public:
  Solver(const LeslieMaterial& material, const Grid& grid, const SolverConfig& config);

  /// cfl dx / max_i c(theta_i), capped by 0.5 / sup|gamma1 - h^2/g|.
  double cfl_dt(const State& state) const;

  /// Advances R, S (upwind transport plus sources) and theta by explicit
  /// midpoint with J frozen. Returns false if a value became non-finite.
  bool wave_substep(State& state, std::span<const double> J, double dt);

  /// theta-weighted step of u_t = (g u_x + h theta_t)_x with u = 0 at both
  /// ends. Diffusion implicit with face-averaged g, drive explicit.
  void heat_substep(State& state, double dt);

  /// J from the current fields, wave substep, heat substep, then measure.
  DiagnosticsRecord step(State& state, double dt);

  const MaterialBounds& bounds() const { return bounds_; }
  const SolverConfig& config() const { return config_; }

 private:
  template <class CoefAt>
  void wave_rates(std::span<const double> R, std::span<const double> S,
                  std::span<const double> J, CoefAt coef_at);
  /// Re-evaluates the cached coefficients unless they already match state.theta.
  void ensure_coefficients(const State& state) const;

  LeslieMaterial material_;
  Grid grid_;
  SolverConfig config_;
  MaterialBounds bounds_;
  mutable std::vector<Coefficients> coef_;
  mutable std::vector<double> coef_theta_;
  // scratch
  std::vector<double> J_, dR_, dS_, dtheta_;
  std::vector<double> mid_theta_, mid_R_, mid_S_;
  std::vector<double> rhs_, lower_, diag_, upper_, face_g_, drive_;
};

/// Solves a tridiagonal system in place (rhs receives the solution). Throws
/// std::runtime_error unless every row is strictly diagonally dominant.
void thomas_solve(std::span<const double> lower, std::span<const double> diag,
                  std::span<const double> upper, std::span<double> rhs);

struct RunResult {
  InitialState initial;
  std::vector<DiagnosticsRecord> records;  ///< records[0] is t = 0
  BlowupReport report;
  State final_state;
  std::size_t steps = 0;
  bool reached_t_end = false;
  double blowup_threshold = 0.0;
  std::string trace_note;  ///< why tracing stopped early, if it did
};

/// Called with (snapshot index, state, J) at t = 0, every snapshot_stride
/// steps, and at the final state.
using SnapshotSink = std::function<void(std::size_t, const State&, std::span<const double>)>;

/// Integrates from the initial data until t_end or the first blowup trigger.
RunResult run(const InitialDataSpec& spec, const LeslieMaterial& material, const Grid& grid,
              const SolverConfig& config, const SnapshotSink& sink = {});

}  // namespace cusplab
