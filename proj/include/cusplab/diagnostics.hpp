#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cusplab/grid.hpp"
#include "cusplab/material.hpp"

namespace cusplab {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Scalars recorded after every solver step.
struct DiagnosticsRecord {
  double t = 0.0;
  double dt = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  double sup_abs_S = 0.0;
  double sup_abs_R = 0.0;
  double sup_abs_J = 0.0;
  double sup_abs_theta_x = 0.0;
  double max_theta_t = 0.0;
  double min_theta_x = 0.0;
  std::size_t argmax_theta_t = 0;
  std::size_t argmin_theta_x = 0;
  bool finite = true;
  // Forward characteristic from the trace start point; NaN when not traced.
  double xi = kNaN;
  double S_on_xi = kNaN;
  double tildeS_on_xi = kNaN;
  double p_on_xi = kNaN;
};

/// E = 1/2 int theta_t^2 + c^2 theta_x^2 + u^2 dx (trapezoid), with theta_t
/// and c theta_x taken from R and S.
double energy(const State& state, const Grid& grid);

/// D = int b(theta) u_x^2 + gamma1 (theta_t + h u_x / gamma1)^2 dx, so that
/// dE/dt = -D for smooth solutions.
double dissipation(const State& state, const LeslieMaterial& material, const Grid& grid);

/// J = u_x + (h/g) theta_t per node; u_x central inside, one-sided at the ends.
void compute_J(const State& state, const LeslieMaterial& material, const Grid& grid,
               std::span<double> out);
std::vector<double> compute_J(const State& state, const LeslieMaterial& material,
                              const Grid& grid);
/// Same, with coefficients already evaluated at state.theta.
void compute_J(const State& state, std::span<const Coefficients> coefficients, const Grid& grid,
               std::span<double> out);

/// Every field of the record except the characteristic columns. If `J_out`
/// is non-empty it receives the J field of this state.
DiagnosticsRecord measure(const State& state, const LeslieMaterial& material,
                          const Grid& grid, std::span<double> J_out = {});
DiagnosticsRecord measure(const State& state, std::span<const Coefficients> coefficients,
                          const LeslieMaterial& material, const Grid& grid,
                          std::span<double> J_out = {});

/// T = min{2 ln 2 / sup|gamma1 - h^2/g|, 1}.
double blowup_bound_T(double damping_sup);
double blowup_bound_T(const LeslieMaterial& material);

enum class Trigger { none, s_threshold, gradient_resolution, non_finite };
std::string to_string(Trigger trigger);

struct TriggerConfig {
  double blowup_threshold = std::numeric_limits<double>::infinity();  ///< on sup|S|
  double gradient_resolution_factor = 8.0;  ///< fire when sup|theta_x| > 1/(K dx)
  double dx = 1.0;
};

Trigger first_trigger(const DiagnosticsRecord& record, const TriggerConfig& config);

struct BlowupReport {
  bool detected = false;
  double t0 = kNaN;
  double T_bound = kNaN;
  Trigger trigger = Trigger::none;
  std::size_t trigger_index = 0;
  // Cusp signature at the detection record relative to the initial record.
  double theta_t_growth = kNaN;
  double theta_x_growth = kNaN;
  std::size_t colocation_cells = 0;
  bool cusp_signature = false;
  // R stays bounded while S grows.
  double R_cap = kNaN;
  double max_sup_R = 0.0;
  bool R_bounded = true;
  double S_growth = kNaN;  ///< max sup|S| up to detection over sup|S| at t = 0
  std::vector<double> sup_S_history;
  std::vector<double> sup_R_history;
};

inline constexpr double kCuspGrowthFactor = 10.0;
inline constexpr std::size_t kCuspColocationCells = 5;

/// Default R cap: 10 sup|R(., 0)| + 1.
double default_R_cap(const DiagnosticsRecord& initial);

/// Scans time-ordered records for the earliest trigger. Histories and the
/// R-boundedness check cover the records up to (and including) the trigger.
BlowupReport detect_blowup(std::span<const DiagnosticsRecord> records,
                           const TriggerConfig& config, double T_bound, double R_cap);

/// Linear interpolation of a nodal field at x; x must lie inside the grid.
double interpolate(std::span<const double> field, const Grid& grid, double x);

struct CharacteristicPoint {
  double t = 0.0;
  double xi = 0.0;
  double S = 0.0;
  double p = 0.0;  ///< 1/2 int_0^t (gamma1 - h^2/g)(xi(s), s) ds
  double tildeS = 0.0;
};

/// Follows d xi/dt = c(theta(xi, t)) through a time-ordered sequence of
/// states. Each advance uses explicit midpoint in time, with theta linearly
/// interpolated in x and averaged between the two frames at the half step.
class CharacteristicTracer {
 public:
  CharacteristicTracer(const LeslieMaterial& material, const Grid& grid, const State& initial,
                       double start_x = 0.0);

  /// Throws std::runtime_error if the characteristic leaves the grid.
  const CharacteristicPoint& advance(const State& next);
  const CharacteristicPoint& current() const { return point_; }

 private:
  const LeslieMaterial* material_;
  Grid grid_;
  std::vector<double> previous_theta_;
  CharacteristicPoint point_;
  double damping_here_;
};

std::vector<CharacteristicPoint> trace_characteristic(std::span<const State> frames,
                                                      const LeslieMaterial& material,
                                                      const Grid& grid, double start_x = 0.0);

}  // namespace cusplab
