#include "cusplab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cusplab {

namespace {

double trapezoid_weight(std::size_t i, std::size_t n, double dx) {
  return (i == 0 || i + 1 == n) ? 0.5 * dx : dx;
}

double central_ux(std::span<const double> u, std::size_t i, double dx) {
  const std::size_t n = u.size();
  if (i == 0) return (u[1] - u[0]) / dx;
  if (i + 1 == n) return (u[n - 1] - u[n - 2]) / dx;
  return (u[i + 1] - u[i - 1]) / (2.0 * dx);
}

// Shared by compute_J and measure so the solver and the diagnostics agree.
double j_value(double ux, const Coefficients& co, double theta_t) {
  return ux + co.h / co.g * theta_t;
}

}  // namespace

double energy(const State& state, const Grid& grid) {
  const std::size_t n = state.size();
  const double dx = grid.dx();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wave = 0.5 * (state.R[i] * state.R[i] + state.S[i] * state.S[i]);
    sum += trapezoid_weight(i, n, dx) * (wave + state.u[i] * state.u[i]);
  }
  return 0.5 * sum;
}

double dissipation(const State& state, const LeslieMaterial& material, const Grid& grid) {
  const std::size_t n = state.size();
  const double dx = grid.dx();
  const double gamma1 = material.gamma1;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Coefficients co = material.coefficients(state.theta[i]);
    const double ux = central_ux(state.u, i, dx);
    const double b = co.g - co.h * co.h / gamma1;
    const double mixed = state.theta_t(i) + co.h / gamma1 * ux;
    sum += trapezoid_weight(i, n, dx) * (b * ux * ux + gamma1 * mixed * mixed);
  }
  return sum;
}

template <class CoefAt>
void compute_J_impl(const State& state, const Grid& grid, std::span<double> out, CoefAt coef_at) {
  const std::size_t n = state.size();
  if (out.size() != n) throw std::invalid_argument("compute_J: output size mismatch");
  const double dx = grid.dx();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = j_value(central_ux(state.u, i, dx), coef_at(i), state.theta_t(i));
  }
}

void compute_J(const State& state, const LeslieMaterial& material, const Grid& grid,
               std::span<double> out) {
  compute_J_impl(state, grid, out,
                 [&](std::size_t i) { return material.coefficients(state.theta[i]); });
}

void compute_J(const State& state, std::span<const Coefficients> coefficients, const Grid& grid,
               std::span<double> out) {
  if (coefficients.size() != state.size()) {
    throw std::invalid_argument("compute_J: coefficient size mismatch");
  }
  compute_J_impl(state, grid, out, [&](std::size_t i) { return coefficients[i]; });
}

std::vector<double> compute_J(const State& state, const LeslieMaterial& material,
                              const Grid& grid) {
  std::vector<double> J(state.size());
  compute_J(state, material, grid, J);
  return J;
}

template <class CoefAt>
DiagnosticsRecord measure_impl(const State& state, double gamma1, const Grid& grid,
                               std::span<double> J_out, CoefAt coef_at) {
  const std::size_t n = state.size();
  const double dx = grid.dx();

  DiagnosticsRecord rec;
  rec.t = state.t;
  rec.max_theta_t = -std::numeric_limits<double>::infinity();
  rec.min_theta_x = std::numeric_limits<double>::infinity();

  double energy_sum = 0.0;
  double dissipation_sum = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double R = state.R[i];
    const double S = state.S[i];
    const double u = state.u[i];
    finite = finite && std::isfinite(R) && std::isfinite(S) && std::isfinite(u) &&
             std::isfinite(state.theta[i]);
    const Coefficients co = coef_at(i);
    const double ux = central_ux(state.u, i, dx);
    const double theta_t = 0.5 * (R + S);
    const double theta_x = 0.5 * (R - S) / co.c;
    const double J = j_value(ux, co, theta_t);
    if (!J_out.empty()) J_out[i] = J;

    const double w = trapezoid_weight(i, n, dx);
    energy_sum += w * (0.5 * (R * R + S * S) + u * u);
    const double b = co.g - co.h * co.h / gamma1;
    const double mixed = theta_t + co.h / gamma1 * ux;
    dissipation_sum += w * (b * ux * ux + gamma1 * mixed * mixed);

    rec.sup_abs_S = std::max(rec.sup_abs_S, std::abs(S));
    rec.sup_abs_R = std::max(rec.sup_abs_R, std::abs(R));
    rec.sup_abs_J = std::max(rec.sup_abs_J, std::abs(J));
    rec.sup_abs_theta_x = std::max(rec.sup_abs_theta_x, std::abs(theta_x));
    if (theta_t > rec.max_theta_t) {
      rec.max_theta_t = theta_t;
      rec.argmax_theta_t = i;
    }
    if (theta_x < rec.min_theta_x) {
      rec.min_theta_x = theta_x;
      rec.argmin_theta_x = i;
    }
  }
  rec.energy = 0.5 * energy_sum;
  rec.dissipation = dissipation_sum;
  rec.finite = finite && std::isfinite(rec.energy);
  return rec;
}

DiagnosticsRecord measure(const State& state, const LeslieMaterial& material, const Grid& grid,
                          std::span<double> J_out) {
  if (!J_out.empty() && J_out.size() != state.size()) {
    throw std::invalid_argument("measure: J size mismatch");
  }
  return measure_impl(state, material.gamma1, grid, J_out,
                      [&](std::size_t i) { return material.coefficients(state.theta[i]); });
}

DiagnosticsRecord measure(const State& state, std::span<const Coefficients> coefficients,
                          const LeslieMaterial& material, const Grid& grid,
                          std::span<double> J_out) {
  if (coefficients.size() != state.size() || (!J_out.empty() && J_out.size() != state.size())) {
    throw std::invalid_argument("measure: size mismatch");
  }
  return measure_impl(state, material.gamma1, grid, J_out,
                      [&](std::size_t i) { return coefficients[i]; });
}

double blowup_bound_T(double damping_sup) {
  return std::min(2.0 * std::numbers::ln2 / damping_sup, 1.0);
}

double blowup_bound_T(const LeslieMaterial& material) {
  return blowup_bound_T(bounds_of(material).damping_sup);
}

std::string to_string(Trigger trigger) {
  switch (trigger) {
    case Trigger::none: return "none";
    case Trigger::s_threshold: return "S_threshold";
    case Trigger::gradient_resolution: return "gradient_resolution";
    case Trigger::non_finite: return "non_finite";
  }
  return "unknown";
}

Trigger first_trigger(const DiagnosticsRecord& rec, const TriggerConfig& config) {
  if (!rec.finite) return Trigger::non_finite;
  if (rec.sup_abs_S > config.blowup_threshold) return Trigger::s_threshold;
  if (rec.sup_abs_theta_x > 1.0 / (config.gradient_resolution_factor * config.dx)) {
    return Trigger::gradient_resolution;
  }
  return Trigger::none;
}

double default_R_cap(const DiagnosticsRecord& initial) { return 10.0 * initial.sup_abs_R + 1.0; }

BlowupReport detect_blowup(std::span<const DiagnosticsRecord> records,
                           const TriggerConfig& config, double T_bound, double R_cap) {
  BlowupReport report;
  report.T_bound = T_bound;
  report.R_cap = R_cap;
  if (records.empty()) return report;

  std::size_t last = records.size() - 1;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const Trigger trig = first_trigger(records[k], config);
    if (trig != Trigger::none) {
      report.detected = true;
      report.trigger = trig;
      report.trigger_index = k;
      report.t0 = records[k].t;
      last = k;
      break;
    }
  }

  double max_sup_S = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    report.sup_S_history.push_back(records[k].sup_abs_S);
    report.sup_R_history.push_back(records[k].sup_abs_R);
    if (records[k].finite) {
      report.max_sup_R = std::max(report.max_sup_R, records[k].sup_abs_R);
      max_sup_S = std::max(max_sup_S, records[k].sup_abs_S);
    }
  }
  report.R_bounded = report.max_sup_R <= R_cap;
  const DiagnosticsRecord& first = records.front();
  report.S_growth = max_sup_S / first.sup_abs_S;

  if (report.detected) {
    const DiagnosticsRecord& hit = records[last];
    report.theta_t_growth = hit.max_theta_t / first.max_theta_t;
    report.theta_x_growth = hit.min_theta_x / first.min_theta_x;
    report.colocation_cells = hit.argmax_theta_t > hit.argmin_theta_x
                                  ? hit.argmax_theta_t - hit.argmin_theta_x
                                  : hit.argmin_theta_x - hit.argmax_theta_t;
    report.cusp_signature = hit.finite && report.theta_t_growth >= kCuspGrowthFactor &&
                            report.theta_x_growth >= kCuspGrowthFactor &&
                            report.colocation_cells <= kCuspColocationCells;
  }
  return report;
}

double interpolate(std::span<const double> field, const Grid& grid, double x) {
  const double dx = grid.dx();
  const double s = (x - grid.x_min) / dx;
  if (!(s >= 0.0) || s > static_cast<double>(grid.nx - 1)) {
    throw std::out_of_range("interpolate: point outside the grid");
  }
  auto i = static_cast<std::size_t>(s);
  if (i >= grid.nx - 1) i = grid.nx - 2;
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * field[i] + w * field[i + 1];
}

CharacteristicTracer::CharacteristicTracer(const LeslieMaterial& material, const Grid& grid,
                                           const State& initial, double start_x)
    : material_(&material), grid_(grid), previous_theta_(initial.theta) {
  if (!grid_.contains(start_x, start_x)) {
    throw std::runtime_error("characteristic start point outside the grid");
  }
  point_.t = initial.t;
  point_.xi = start_x;
  point_.S = interpolate(initial.S, grid_, start_x);
  point_.p = 0.0;
  point_.tildeS = point_.S;
  damping_here_ = material.damping(interpolate(initial.theta, grid_, start_x));
}

const CharacteristicPoint& CharacteristicTracer::advance(const State& next) {
  const double dt = next.t - point_.t;
  auto inside = [&](double x) {
    if (!grid_.contains(x, x)) throw std::runtime_error("characteristic left the domain");
    return x;
  };

  const double c_start = material_->c(interpolate(previous_theta_, grid_, point_.xi));
  const double x_half = inside(point_.xi + 0.5 * dt * c_start);
  const double theta_half = 0.5 * (interpolate(previous_theta_, grid_, x_half) +
                                   interpolate(next.theta, grid_, x_half));
  const double x_new = inside(point_.xi + dt * material_->c(theta_half));

  const double damping_new = material_->damping(interpolate(next.theta, grid_, x_new));
  point_.p += 0.5 * (0.5 * dt * (damping_here_ + damping_new));
  damping_here_ = damping_new;

  point_.t = next.t;
  point_.xi = x_new;
  point_.S = interpolate(next.S, grid_, x_new);
  point_.tildeS = std::exp(point_.p) * point_.S;
  previous_theta_ = next.theta;
  return point_;
}

std::vector<CharacteristicPoint> trace_characteristic(std::span<const State> frames,
                                                      const LeslieMaterial& material,
                                                      const Grid& grid, double start_x) {
  std::vector<CharacteristicPoint> path;
  if (frames.empty()) return path;
  CharacteristicTracer tracer(material, grid, frames.front(), start_x);
  path.push_back(tracer.current());
  for (std::size_t k = 1; k < frames.size(); ++k) path.push_back(tracer.advance(frames[k]));
  return path;
}

}  // namespace cusplab
