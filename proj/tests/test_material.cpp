#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cusplab/material.hpp"
#include "cusplab/quadrature.hpp"

using namespace cusplab;
using std::numbers::pi;

namespace {

// Valid materials built from free alpha1..alpha5 with Parodi's relation and
// both compatibility relations imposed.
LeslieMaterial random_material(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LeslieMaterial m;
  auto& a = m.alpha;
  a[0] = u(rng);
  a[1] = -0.1 - 2.0 * u(rng);
  a[2] = 0.1 + 2.0 * u(rng);
  a[3] = 0.5 + 2.0 * u(rng);
  a[4] = u(rng);
  a[5] = a[1] + a[2] + a[4];
  m.gamma1 = a[2] - a[1];
  m.gamma2 = a[5] - a[4];
  m.K1 = 0.5 + 1.5 * u(rng);
  m.K3 = 0.5 + 1.5 * u(rng);
  return m;
}

}  // namespace

TEST_SUITE("material") {
  TEST_CASE("presets satisfy every relation") {
    for (const auto& name : preset_names()) {
      CAPTURE(name);
      const ValidationReport rep = validate(preset(name));
      CHECK(rep.ok);
      CHECK(rep.violations.empty());
    }
  }

  TEST_CASE("single-field mutations name the broken relation") {
    LeslieMaterial m = preset("special");
    m.alpha[5] = 1.0;  // alpha2 + alpha3 = 0 but alpha6 - alpha5 = 1
    ValidationReport rep = validate(m);
    CHECK_FALSE(rep.ok);
    CHECK(rep.violates("parodi"));

    m = preset("general");
    m.alpha[3] = -1.0;
    CHECK(validate(m).violates("alpha4_positive"));

    m = preset("general");
    m.gamma1 = 5.0;
    rep = validate(m);
    CHECK(rep.violates("gamma1_compatibility"));
    CHECK_FALSE(rep.violates("parodi"));

    m = preset("general");
    m.K1 = 0.0;
    CHECK(validate(m).violates("K1_positive"));

    m = preset("general");
    m.K3 = -2.0;
    CHECK(validate(m).violates("K3_positive"));
  }

  TEST_CASE("violation slack is signed lhs minus rhs") {
    LeslieMaterial m = preset("special");
    m.alpha[5] = 1.0;
    const ValidationReport rep = validate(m);
    for (const auto& v : rep.violations) {
      if (v.relation == "parodi") CHECK(v.slack == doctest::Approx(-1.0));
    }
  }

  TEST_CASE("g values") {
    const LeslieMaterial special = preset("special");
    for (double th : {0.0, 0.3, 1.0, 2.5, -4.0}) CHECK(special.g(th) == doctest::Approx(1.0).epsilon(1e-15));

    const LeslieMaterial general = preset("general");
    CHECK(general.g(0.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(general.g(pi / 2) == doctest::Approx(2.5).epsilon(1e-15));

    LeslieMaterial doubled = general;
    doubled.alpha[3] *= 2.0;
    for (double th : {0.0, 0.7, 1.9}) {
      CHECK(doubled.g(th) - general.g(th) == doctest::Approx(general.alpha[3] / 2.0).epsilon(1e-14));
    }
  }

  TEST_CASE("h, c, c' and b values") {
    const LeslieMaterial g = preset("general");
    CHECK(g.h(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.h(pi / 2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.c(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.c(pi / 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(g.c_prime(pi / 4) == doctest::Approx(0.5 / std::sqrt(1.5)).epsilon(1e-14));

    const LeslieMaterial s = preset("special");
    for (double th : {0.0, 0.4, 1.3}) {
      CHECK(s.h(th) == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(s.b(th) == doctest::Approx(0.5).epsilon(1e-15));
    }

    const LeslieMaterial cs = preset("constant-speed");
    for (double th : {0.0, 0.4, 1.3, 2.9}) {
      CHECK(cs.c(th) == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(cs.c_prime(th) == 0.0);
    }
  }

  TEST_CASE("coefficients() agrees with the single evaluators") {
    const LeslieMaterial m = preset("general");
    for (double th : {-1.0, 0.2, 0.9, 2.2}) {
      const Coefficients co = m.coefficients(th);
      CHECK(co.g == m.g(th));
      CHECK(co.h == m.h(th));
      CHECK(co.c == m.c(th));
      CHECK(co.c_prime == doctest::Approx(m.c_prime(th)).epsilon(1e-15));
    }
  }

  TEST_CASE("c rejects a non-positive radicand") {
    LeslieMaterial m = preset("general");
    m.K1 = 0.0;
    m.K3 = 0.0;
    CHECK_THROWS_AS(m.c(0.3), std::domain_error);
  }

  TEST_CASE("bounds of the presets") {
    const MaterialBounds g = bounds_of(preset("general"));
    CHECK(g.damping_margin == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(g.damping_sup == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
    CHECK(g.C_L == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.C_U == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(g.g_L == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(g.g_U == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(g.h_L == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.h_U == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.h_over_g_sup == doctest::Approx(0.8).epsilon(1e-9));

    const MaterialBounds s = bounds_of(preset("special"));
    CHECK(s.damping_margin == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.damping_sup == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("bounds_of preconditions") {
    CHECK_THROWS_AS(bounds_of(preset("general"), 63), std::invalid_argument);
    LeslieMaterial m = preset("special");
    m.gamma1 = 0.5;  // gamma1 - h^2/g = -0.5 everywhere
    CHECK_THROWS_AS(bounds_of(m), std::runtime_error);
  }

  TEST_CASE("property: relations and bounds on random valid materials") {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    int checked = 0;
    for (int k = 0; k < 40; ++k) {
      const LeslieMaterial m = random_material(rng);
      if (!validate(m).ok) continue;
      ++checked;
      const MaterialBounds b = bounds_of(m);
      CHECK(b.damping_margin > 0.0);
      CHECK(b.g_L > 0.0);
      CHECK(b.C_L > 0.0);
      for (int i = 0; i < 1000; ++i) {
        const double th = angle(rng);
        const double h1 = m.h(th);
        const double h2 = m.h_gamma_form(th);
        CHECK(std::abs(h1 - h2) <= 1e-12 * std::max(1.0, std::abs(h1)));
        CHECK(m.b(th) > 0.0);
        CHECK(m.g(th) >= b.g_L - 1e-9);
        CHECK(m.g(th) <= b.g_U + 1e-9);
        CHECK(m.c(th) >= b.C_L - 1e-9);
        CHECK(m.c(th) <= b.C_U + 1e-9);
        CHECK(m.damping(th) >= b.damping_margin - 1e-9);
        CHECK(m.damping(th) <= b.damping_sup + 1e-9);
      }
    }
    CHECK(checked > 20);
  }

  TEST_CASE("property: c' matches a centred difference of c") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(-4.0, 4.0);
    for (const auto& name : preset_names()) {
      const LeslieMaterial m = preset(name);
      for (int i = 0; i < 200; ++i) {
        const double th = angle(rng);
        const double step = 1e-6;
        const double fd = (m.c(th + step) - m.c(th - step)) / (2.0 * step);
        CHECK(std::abs(fd - m.c_prime(th)) < 1e-6);
      }
    }
  }

  TEST_CASE("unknown preset") { CHECK_THROWS_AS(preset("nematic"), std::invalid_argument); }
}

TEST_SUITE("quadrature") {
  TEST_CASE("simpson is exact on cubics") {
    const auto r = simpson([](double x) { return x * x * x - 2.0 * x + 1.0; }, -1.0, 2.0, 1e-12);
    CHECK(r.value == doctest::Approx(3.75).epsilon(1e-13));
  }

  TEST_CASE("simpson converges on a smooth integrand") {
    const auto r = simpson([](double x) { return std::sin(x); }, 0.0, pi, 1e-11);
    CHECK(std::abs(r.value - 2.0) < 1e-10);
    CHECK(r.error_estimate < 1e-11);
  }

  TEST_CASE("simpson gives up at the panel cap") {
    CHECK_THROWS_AS(simpson([](double x) { return std::sqrt(std::abs(x)); }, -1.0, 1.0, 1e-16, 8, 64),
                    std::runtime_error);
  }

  TEST_CASE("empty interval") {
    CHECK(simpson([](double) { return 1.0; }, 1.0, 1.0, 1e-10).value == 0.0);
  }
}
