#include <doctest.h>

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cusplab/diagnostics.hpp"

using namespace cusplab;
using std::numbers::pi;

namespace {

State filled(const Grid& grid, auto theta, auto theta_t, auto theta_x, auto u) {
  State st(grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    st.theta[i] = theta(x);
    st.u[i] = u(x);
    st.R[i] = theta_t(x) + theta_x(x);  // callers pass c theta_x directly
    st.S[i] = theta_t(x) - theta_x(x);
  }
  return st;
}

DiagnosticsRecord record(double t, double supS, double supR = 1.0) {
  DiagnosticsRecord r;
  r.t = t;
  r.sup_abs_S = supS;
  r.sup_abs_R = supR;
  r.sup_abs_theta_x = 1.0;
  r.max_theta_t = 1.0;
  r.min_theta_x = -1.0;
  return r;
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("energy of simple states") {
    const Grid grid(0.0, 1.0, 101);
    auto zero = [](double) { return 0.0; };
    auto one = [](double) { return 1.0; };
    CHECK(energy(filled(grid, zero, zero, zero, one), grid) == doctest::Approx(0.5).epsilon(1e-14));
    // theta_t = 1: (R^2 + S^2)/2 = 1
    CHECK(energy(filled(grid, zero, one, zero, zero), grid) == doctest::Approx(0.5).epsilon(1e-14));
    // c theta_x = 1 gives the same
    CHECK(energy(filled(grid, zero, zero, one, zero), grid) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(energy(filled(grid, zero, one, one, one), grid) == doctest::Approx(1.5).epsilon(1e-14));
  }

  TEST_CASE("dissipation of simple states") {
    const Grid grid(0.0, 2.0, 201);
    const LeslieMaterial s = preset("special");
    auto zero = [](double) { return 0.0; };
    auto one = [](double) { return 1.0; };
    // theta_t = 1, u = 0: D = gamma1 * length
    CHECK(dissipation(filled(grid, zero, one, zero, zero), s, grid) == doctest::Approx(4.0).epsilon(1e-13));
    // theta_t = 0, u_x = 1: b + h^2/gamma1 = g, so D = g * length
    const LeslieMaterial g = preset("general");
    auto lin = [](double x) { return x; };
    auto th = [](double) { return pi / 2; };
    CHECK(dissipation(filled(grid, th, zero, zero, lin), g, grid) == doctest::Approx(5.0).epsilon(1e-12));
  }

  TEST_CASE("J vanishes on a manufactured state") {
    const Grid grid(-3.0, 3.0, 6001);
    const LeslieMaterial m = preset("special");  // h/g = 1
    auto th = [](double x) { return pi / 4 + 0.2 * std::sin(x); };
    auto tt = [](double x) { return std::cos(x); };
    auto zero = [](double) { return 0.0; };
    auto u = [](double x) { return -std::sin(x); };
    const State st = filled(grid, th, tt, zero, u);
    const std::vector<double> J = compute_J(st, m, grid);
    for (std::size_t i = 1; i + 1 < grid.nx; ++i) CHECK(std::abs(J[i]) < 1e-6);

    std::vector<Coefficients> co(grid.nx);
    for (std::size_t i = 0; i < grid.nx; ++i) co[i] = m.coefficients(st.theta[i]);
    std::vector<double> J2(grid.nx);
    compute_J(st, co, grid, J2);
    CHECK(J2 == J);
  }

  TEST_CASE("measure agrees with the standalone functionals") {
    const Grid grid(-2.0, 2.0, 401);
    const LeslieMaterial m = preset("general");
    auto th = [](double x) { return 0.5 + x * x; };
    auto tt = [](double x) { return std::sin(3 * x); };
    auto tx = [](double x) { return 2.0 - x; };
    auto u = [](double x) { return std::cos(x) * 0.3; };
    const State st = filled(grid, th, tt, tx, u);
    std::vector<double> J(grid.nx);
    const DiagnosticsRecord r = measure(st, m, grid, J);
    CHECK(r.energy == doctest::Approx(energy(st, grid)).epsilon(1e-14));
    CHECK(r.dissipation == doctest::Approx(dissipation(st, m, grid)).epsilon(1e-14));
    CHECK(J == compute_J(st, m, grid));
    CHECK(r.finite);

    State bad = st;
    bad.S[17] = std::nan("");
    CHECK_FALSE(measure(bad, m, grid).finite);
  }

  TEST_CASE("theorem time bound") {
    CHECK(blowup_bound_T(preset("general")) == doctest::Approx(6.0 * std::numbers::ln2 / 7.0).epsilon(1e-10));
    CHECK(blowup_bound_T(preset("general")) == doctest::Approx(0.59412).epsilon(1e-4));
    CHECK(blowup_bound_T(preset("special")) == 1.0);
    CHECK(blowup_bound_T(2.0 * std::numbers::ln2) == 1.0);
    CHECK(blowup_bound_T(4.0 * std::numbers::ln2) == doctest::Approx(0.5));
  }

  TEST_CASE("triggers in priority order") {
    TriggerConfig cfg;
    cfg.blowup_threshold = 100.0;
    cfg.gradient_resolution_factor = 8.0;
    cfg.dx = 0.01;  // gradient limit 12.5
    DiagnosticsRecord r = record(0.1, 50.0);
    CHECK(first_trigger(r, cfg) == Trigger::none);
    r.sup_abs_theta_x = 13.0;
    CHECK(first_trigger(r, cfg) == Trigger::gradient_resolution);
    r.sup_abs_S = 101.0;
    CHECK(first_trigger(r, cfg) == Trigger::s_threshold);
    r.finite = false;
    CHECK(first_trigger(r, cfg) == Trigger::non_finite);
    CHECK(to_string(Trigger::s_threshold) == "S_threshold");
  }

  TEST_CASE("detect_blowup on a synthetic history") {
    TriggerConfig cfg;
    cfg.blowup_threshold = 100.0;
    cfg.dx = 0.01;
    std::vector<DiagnosticsRecord> recs;
    for (int k = 0; k < 10; ++k) recs.push_back(record(0.1 * k, 10.0 * (k + 1), 2.0));
    // k = 9 has sup|S| = 100, not above; push one that is
    DiagnosticsRecord hit = record(1.0, 150.0, 3.0);
    hit.max_theta_t = 20.0;
    hit.min_theta_x = -30.0;
    hit.argmax_theta_t = 100;
    hit.argmin_theta_x = 103;
    recs.push_back(hit);
    recs.push_back(record(1.1, 1e6, 1e6));  // after detection, ignored

    const BlowupReport rep = detect_blowup(recs, cfg, 0.6, 25.0);
    CHECK(rep.detected);
    CHECK(rep.trigger == Trigger::s_threshold);
    CHECK(rep.trigger_index == 10);
    CHECK(rep.t0 == 1.0);
    CHECK(rep.T_bound == 0.6);
    CHECK(rep.sup_S_history.size() == 11);
    CHECK(rep.S_growth == doctest::Approx(15.0));
    CHECK(rep.max_sup_R == 3.0);
    CHECK(rep.R_bounded);
    CHECK(rep.theta_t_growth == 20.0);
    CHECK(rep.theta_x_growth == 30.0);
    CHECK(rep.colocation_cells == 3);
    CHECK(rep.cusp_signature);

    recs[10].argmin_theta_x = 200;
    CHECK_FALSE(detect_blowup(recs, cfg, 0.6, 25.0).cusp_signature);
    recs.pop_back();
    recs.pop_back();
    const BlowupReport quiet = detect_blowup(recs, cfg, 0.6, 1.0);
    CHECK_FALSE(quiet.detected);
    CHECK_FALSE(quiet.R_bounded);
    CHECK(std::isnan(quiet.t0));
    CHECK(default_R_cap(recs.front()) == 21.0);
  }

  TEST_CASE("interpolation") {
    const Grid grid(0.0, 1.0, 21);
    std::vector<double> f(grid.nx);
    for (std::size_t i = 0; i < grid.nx; ++i) f[i] = 3.0 * grid.x(i) - 1.0;
    CHECK(interpolate(f, grid, 0.37) == doctest::Approx(0.11));
    CHECK(interpolate(f, grid, 1.0) == doctest::Approx(2.0));
    CHECK(interpolate(f, grid, 0.0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(interpolate(f, grid, 1.01), std::out_of_range);
    CHECK_THROWS_AS(interpolate(f, grid, -0.01), std::out_of_range);
  }

  TEST_CASE("characteristic at unit speed moves with t") {
    const LeslieMaterial m = preset("constant-speed");
    const Grid grid(-1.0, 3.0, 401);
    std::vector<State> frames;
    for (int k = 0; k <= 100; ++k) {
      State st(grid.nx);
      st.t = 0.02 * k;
      for (std::size_t i = 0; i < grid.nx; ++i) {
        st.theta[i] = 0.3 * std::sin(grid.x(i) - st.t);
        st.S[i] = 2.0;
      }
      frames.push_back(st);
    }
    const auto path = trace_characteristic(frames, m, grid);
    REQUIRE(path.size() == frames.size());
    for (const auto& p : path) {
      CHECK(p.xi == doctest::Approx(p.t).epsilon(1e-12));
      CHECK(p.S == doctest::Approx(2.0));
      // damping is gamma1 - h^2/g = 1 for this material
      CHECK(p.p == doctest::Approx(0.5 * p.t).epsilon(1e-12));
      CHECK(p.tildeS == doctest::Approx(2.0 * std::exp(0.5 * p.t)).epsilon(1e-12));
    }
  }

  TEST_CASE("characteristic against an adaptive ODE oracle") {
    const LeslieMaterial m = preset("general");
    const Grid grid(-2.0, 4.0, 6001);
    auto theta_at = [](double x, double t) { return pi / 4 + 0.4 * std::sin(2.0 * x - t); };
    auto S_at = [](double x, double t) { return 1.0 + 0.5 * x + t; };
    std::vector<State> frames;
    const double dt = 0.005;
    for (int k = 0; k <= 200; ++k) {
      State st(grid.nx);
      st.t = dt * k;
      for (std::size_t i = 0; i < grid.nx; ++i) {
        st.theta[i] = theta_at(grid.x(i), st.t);
        st.S[i] = S_at(grid.x(i), st.t);
      }
      frames.push_back(st);
    }
    const auto path = trace_characteristic(frames, m, grid);

    using Y = std::array<double, 2>;  // xi, p
    auto rhs = [&](const Y& y, Y& dy, double t) {
      const double th = theta_at(y[0], t);
      dy[0] = m.c(th);
      dy[1] = 0.5 * m.damping(th);
    };
    namespace ode = boost::numeric::odeint;
    Y y{0.0, 0.0};
    ode::integrate_const(ode::make_dense_output(1e-12, 1e-12, ode::runge_kutta_dopri5<Y>()), rhs,
                         y, 0.0, 1.0, 0.01);
    const double tilde = std::exp(y[1]) * S_at(y[0], 1.0);
    CHECK(path.back().t == doctest::Approx(1.0));
    CHECK(path.back().xi == doctest::Approx(y[0]).epsilon(1e-4));
    CHECK(path.back().tildeS == doctest::Approx(tilde).epsilon(1e-2));
  }

  TEST_CASE("tracer stops outside the grid") {
    const LeslieMaterial m = preset("constant-speed");
    const Grid grid(-1.0, 1.0, 101);
    State a(grid.nx), b(grid.nx);
    b.t = 2.0;
    CharacteristicTracer tracer(m, grid, a, 0.5);
    CHECK_THROWS_AS(tracer.advance(b), std::runtime_error);
    CHECK_THROWS_AS(CharacteristicTracer(m, grid, a, 1.5), std::runtime_error);
  }

  TEST_CASE("property: E >= 0 and D >= 0 on random states") {
    std::mt19937 rng(99);
    std::normal_distribution<double> n01(0.0, 3.0);
    const Grid grid(-1.0, 1.0, 257);
    for (const auto& name : preset_names()) {
      const LeslieMaterial m = preset(name);
      for (int k = 0; k < 50; ++k) {
        State st(grid.nx);
        for (std::size_t i = 0; i < grid.nx; ++i) {
          st.theta[i] = n01(rng);
          st.u[i] = n01(rng);
          st.R[i] = n01(rng);
          st.S[i] = n01(rng);
        }
        CHECK(energy(st, grid) >= 0.0);
        CHECK(dissipation(st, m, grid) >= 0.0);
      }
    }
  }
}
