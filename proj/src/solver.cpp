#include "cusplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cusplab {

void SolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 0.9)) throw std::invalid_argument("cfl must lie in (0, 0.9]");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("t_end must be positive and finite");
  }
  if (blowup_threshold && !(*blowup_threshold > 0.0)) {
    throw std::invalid_argument("blowup_threshold must be positive");
  }
  if (!(blowup_factor > 0.0)) throw std::invalid_argument("blowup_factor must be positive");
  if (!(gradient_resolution_factor > 0.0)) {
    throw std::invalid_argument("gradient_resolution_factor must be positive");
  }
  if (!(heat_weight >= 0.5 && heat_weight <= 1.0)) {
    throw std::invalid_argument("heat_weight must lie in [0.5, 1]");
  }
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
}

void thomas_solve(std::span<const double> lower, std::span<const double> diag,
                  std::span<const double> upper, std::span<double> rhs) {
  const std::size_t m = diag.size();
  if (lower.size() != m || upper.size() != m || rhs.size() != m) {
    throw std::invalid_argument("thomas_solve: size mismatch");
  }
  if (m == 0) return;
  for (std::size_t k = 0; k < m; ++k) {
    const double off = (k > 0 ? std::abs(lower[k]) : 0.0) + (k + 1 < m ? std::abs(upper[k]) : 0.0);
    if (!(std::abs(diag[k]) > off)) {
      throw std::runtime_error("tridiagonal system is not strictly diagonally dominant");
    }
  }
  // Forward sweep keeps the modified upper diagonal in a local buffer.
  std::vector<double> cp(m);
  double denom = diag[0];
  cp[0] = m > 1 ? upper[0] / denom : 0.0;
  rhs[0] /= denom;
  for (std::size_t k = 1; k < m; ++k) {
    denom = diag[k] - lower[k] * cp[k - 1];
    cp[k] = k + 1 < m ? upper[k] / denom : 0.0;
    rhs[k] = (rhs[k] - lower[k] * rhs[k - 1]) / denom;
  }
  for (std::size_t k = m - 1; k-- > 0;) rhs[k] -= cp[k] * rhs[k + 1];
}

Solver::Solver(const LeslieMaterial& material, const Grid& grid, const SolverConfig& config)
    : material_(material), grid_(grid), config_(config), bounds_(bounds_of(material)) {
  config_.validate();
  const std::size_t n = grid_.nx;
  for (auto* v : {&J_, &dR_, &dS_, &dtheta_, &mid_theta_, &mid_R_, &mid_S_, &face_g_, &drive_}) {
    v->assign(n, 0.0);
  }
  for (auto* v : {&rhs_, &lower_, &diag_, &upper_}) v->assign(n - 2, 0.0);
}

void Solver::ensure_coefficients(const State& state) const {
  if (coef_theta_ == state.theta) return;
  coef_.resize(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) coef_[i] = material_.coefficients(state.theta[i]);
  coef_theta_ = state.theta;
}

double Solver::cfl_dt(const State& state) const {
  ensure_coefficients(state);
  double c_max = 0.0;
  for (const Coefficients& co : coef_) c_max = std::max(c_max, co.c);
  const double dt = config_.cfl * grid_.dx() / c_max;
  return std::min(dt, 0.5 / bounds_.damping_sup);
}

template <class CoefAt>
void Solver::wave_rates(std::span<const double> R, std::span<const double> S,
                        std::span<const double> J, CoefAt coef_at) {
  const std::size_t n = R.size();
  const double inv_dx = 1.0 / grid_.dx();
  const double gamma1 = material_.gamma1;
  for (std::size_t i = 0; i < n; ++i) {
    const Coefficients co = coef_at(i);
    // S travels right, R travels left; the outflow end copies its neighbour.
    const double S_x = i > 0 ? (S[i] - S[i - 1]) * inv_dx : 0.0;
    const double R_x = i + 1 < n ? (R[i + 1] - R[i]) * inv_dx : 0.0;
    const double quad = co.c_prime / (4.0 * co.c) * (S[i] * S[i] - R[i] * R[i]);
    const double lin = 0.5 * (co.h * co.h / co.g - gamma1) * (R[i] + S[i]) - co.h * J[i];
    dS_[i] = -co.c * S_x + quad + lin;
    dR_[i] = co.c * R_x - quad + lin;
    dtheta_[i] = 0.5 * (R[i] + S[i]);
  }
}

bool Solver::wave_substep(State& state, std::span<const double> J, double dt) {
  const std::size_t n = state.size();
  if (J.size() != n) throw std::invalid_argument("wave_substep: J size mismatch");

  ensure_coefficients(state);
  wave_rates(state.R, state.S, J, [this](std::size_t i) { return coef_[i]; });
  for (std::size_t i = 0; i < n; ++i) {
    mid_theta_[i] = state.theta[i] + 0.5 * dt * dtheta_[i];
    mid_R_[i] = state.R[i] + 0.5 * dt * dR_[i];
    mid_S_[i] = state.S[i] + 0.5 * dt * dS_[i];
  }
  wave_rates(mid_R_, mid_S_, J,
             [this](std::size_t i) { return material_.coefficients(mid_theta_[i]); });
  bool finite = true;
  for (std::size_t i = 0; i < n; ++i) {
    state.theta[i] += dt * dtheta_[i];
    state.R[i] += dt * dR_[i];
    state.S[i] += dt * dS_[i];
    finite = finite && std::isfinite(state.theta[i]) && std::isfinite(state.R[i]) &&
             std::isfinite(state.S[i]);
  }
  return finite;
}

void Solver::heat_substep(State& state, double dt) {
  const std::size_t n = state.size();
  const double dx = grid_.dx();
  const double r = dt / (dx * dx);
  const double w = config_.heat_weight;

  ensure_coefficients(state);
  // face_g_[i] is g on the face between nodes i and i+1; drive_ is h theta_t.
  for (std::size_t i = 0; i + 1 < n; ++i) face_g_[i] = 0.5 * (coef_[i].g + coef_[i + 1].g);
  for (std::size_t i = 0; i < n; ++i) drive_[i] = coef_[i].h * state.theta_t(i);

  const std::vector<double>& u = state.u;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const std::size_t k = i - 1;
    const double gl = face_g_[i - 1];
    const double gr = face_g_[i];
    const double flux_diff = gr * (u[i + 1] - u[i]) - gl * (u[i] - u[i - 1]);
    lower_[k] = -w * r * gl;
    upper_[k] = -w * r * gr;
    diag_[k] = 1.0 + w * r * (gl + gr);
    rhs_[k] = u[i] + (1.0 - w) * r * flux_diff + dt * (drive_[i + 1] - drive_[i - 1]) / (2.0 * dx);
  }
  thomas_solve(lower_, diag_, upper_, rhs_);
  state.u.front() = 0.0;
  state.u.back() = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) state.u[i] = rhs_[i - 1];
}

DiagnosticsRecord Solver::step(State& state, double dt) {
  ensure_coefficients(state);
  compute_J(state, coef_, grid_, J_);
  const bool finite = wave_substep(state, J_, dt);
  if (finite) heat_substep(state, dt);
  state.t += dt;
  DiagnosticsRecord rec =
      finite ? measure(state, coef_, material_, grid_) : measure(state, material_, grid_);
  rec.dt = dt;
  rec.finite = rec.finite && finite;
  return rec;
}

RunResult run(const InitialDataSpec& spec, const LeslieMaterial& material, const Grid& grid,
              const SolverConfig& config, const SnapshotSink& sink) {
  config.validate();
  RunResult result;
  result.initial = build_initial_state(spec, material, grid, config.t_end);
  State state = result.initial.state;
  Solver solver(material, grid, config);

  std::vector<double> J(grid.nx);
  DiagnosticsRecord rec = measure(state, material, grid, J);

  std::optional<CharacteristicTracer> tracer;
  auto stamp = [&](DiagnosticsRecord& r) {
    if (!tracer) return;
    const CharacteristicPoint& p = tracer->current();
    r.xi = p.xi;
    r.S_on_xi = p.S;
    r.tildeS_on_xi = p.tildeS;
    r.p_on_xi = p.p;
  };
  if (config.trace) {
    try {
      tracer.emplace(material, grid, state, config.trace_start_x);
    } catch (const std::exception& e) {
      result.trace_note = e.what();
    }
  }
  stamp(rec);
  result.records.push_back(rec);

  result.blowup_threshold = config.blowup_threshold.value_or(config.blowup_factor * rec.sup_abs_S);
  TriggerConfig trig;
  trig.blowup_threshold = result.blowup_threshold;
  trig.gradient_resolution_factor = config.gradient_resolution_factor;
  trig.dx = grid.dx();

  std::size_t snapshot = 0;
  if (sink) sink(snapshot++, state, J);

  bool stopped = first_trigger(rec, trig) != Trigger::none;
  const double t_tol = 1e-12 * config.t_end;
  while (!stopped && state.t < config.t_end - t_tol && result.steps < config.max_steps) {
    double dt = solver.cfl_dt(state);
    if (state.t + dt > config.t_end - t_tol) dt = config.t_end - state.t;
    rec = solver.step(state, dt);
    ++result.steps;

    if (tracer && rec.finite) {
      try {
        tracer->advance(state);
      } catch (const std::exception& e) {
        result.trace_note = e.what();
        tracer.reset();
      }
    }
    stamp(rec);
    result.records.push_back(rec);

    stopped = first_trigger(rec, trig) != Trigger::none;
    const bool at_end = stopped || state.t >= config.t_end - t_tol;
    const bool due = config.snapshot_stride > 0 && result.steps % config.snapshot_stride == 0;
    if (sink && (due || at_end)) {
      compute_J(state, material, grid, J);
      sink(snapshot++, state, J);
    }
  }

  result.reached_t_end = !stopped && state.t >= config.t_end - t_tol;
  result.report = detect_blowup(result.records, trig, blowup_bound_T(solver.bounds().damping_sup),
                                default_R_cap(result.records.front()));
  result.final_state = std::move(state);
  return result;
}

}  // namespace cusplab
