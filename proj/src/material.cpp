#include "cusplab/material.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

namespace cusplab {

namespace {

struct Trig {
  double s2;  // sin^2
  double c2;  // cos^2
  double sc;  // sin cos
};

Trig trig(double theta) {
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return {s * s, c * c, s * c};
}

double g_from(const LeslieMaterial& m, const Trig& t) {
  const auto& a = m.alpha;
  return a[0] * t.s2 * t.c2 + 0.5 * (a[4] - a[1]) * t.s2 +
         0.5 * (a[2] + a[5]) * t.c2 + 0.5 * a[3];
}

double h_from(const LeslieMaterial& m, const Trig& t) {
  return m.alpha[2] * t.c2 - m.alpha[1] * t.s2;
}

double c_from(const LeslieMaterial& m, const Trig& t) {
  const double radicand = m.K1 * t.c2 + m.K3 * t.s2;
  if (!(radicand > 0.0)) {
    throw std::domain_error("wave speed radicand K1 cos^2 + K3 sin^2 is not positive");
  }
  return std::sqrt(radicand);
}

bool nearly_equal(double lhs, double rhs) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return std::abs(lhs - rhs) <= 1e-12 * scale;
}

}  // namespace

double LeslieMaterial::g(double theta) const { return g_from(*this, trig(theta)); }

double LeslieMaterial::h(double theta) const { return h_from(*this, trig(theta)); }

double LeslieMaterial::h_gamma_form(double theta) const {
  return 0.5 * (gamma1 + gamma2 * std::cos(2.0 * theta));
}

double LeslieMaterial::c(double theta) const { return c_from(*this, trig(theta)); }

double LeslieMaterial::c_prime(double theta) const {
  const Trig t = trig(theta);
  return (K3 - K1) * t.sc / c_from(*this, t);
}

double LeslieMaterial::b(double theta) const {
  const Trig t = trig(theta);
  const double hv = h_from(*this, t);
  return g_from(*this, t) - hv * hv / gamma1;
}

double LeslieMaterial::damping(double theta) const {
  const Trig t = trig(theta);
  const double hv = h_from(*this, t);
  return gamma1 - hv * hv / g_from(*this, t);
}

Coefficients LeslieMaterial::coefficients(double theta) const {
  const Trig t = trig(theta);
  const double cv = c_from(*this, t);
  return {g_from(*this, t), h_from(*this, t), cv, (K3 - K1) * t.sc / cv};
}

bool ValidationReport::violates(std::string_view relation) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.relation == relation; });
}

ValidationReport validate(const LeslieMaterial& m) {
  ValidationReport report;
  const auto& a = m.alpha;
  auto equality = [&](const char* name, double lhs, double rhs) {
    if (!nearly_equal(lhs, rhs)) report.violations.push_back({name, lhs - rhs});
  };
  auto positive = [&](const char* name, double lhs, double rhs) {
    if (!(lhs > rhs)) report.violations.push_back({name, lhs - rhs});
  };

  equality("gamma1_compatibility", m.gamma1, a[2] - a[1]);
  equality("gamma2_compatibility", m.gamma2, a[5] - a[4]);
  equality("parodi", a[1] + a[2], a[5] - a[4]);

  positive("alpha4_positive", a[3], 0.0);
  positive("bulk_viscosity_positive", 2 * a[0] + 3 * a[3] + 2 * a[4] + 2 * a[5], 0.0);
  positive("gamma1_positive", a[2] - a[1], 0.0);
  positive("shear_viscosity_positive", 2 * a[3] + a[4] + a[5], 0.0);
  const double mixed = a[1] + a[2] + m.gamma2;
  positive("dissipation_discriminant", 4 * m.gamma1 * (2 * a[3] + a[4] + a[5]),
           mixed * mixed);
  positive("K1_positive", m.K1, 0.0);
  positive("K3_positive", m.K3, 0.0);

  report.ok = report.violations.empty();
  return report;
}

MaterialBounds bounds_of(const LeslieMaterial& m, int n_samples) {
  if (n_samples < 64) throw std::invalid_argument("bounds_of needs at least 64 samples");

  const double pi = std::numbers::pi;
  std::vector<double> thetas;
  thetas.reserve(static_cast<std::size_t>(n_samples) + 3);
  for (int i = 0; i < n_samples; ++i) thetas.push_back(pi * i / n_samples);
  thetas.push_back(0.0);
  thetas.push_back(0.25 * pi);
  thetas.push_back(0.5 * pi);

  const double spacing = pi / n_samples;

  // Sampled extremum followed by a Brent polish on the neighbouring bracket.
  auto extremum = [&](const std::function<double(double)>& f, bool maximize) {
    const double sign = maximize ? -1.0 : 1.0;
    auto objective = [&](double th) { return sign * f(th); };
    double best_theta = thetas.front();
    double best = objective(best_theta);
    for (double th : thetas) {
      const double v = objective(th);
      if (v < best) {
        best = v;
        best_theta = th;
      }
    }
    const auto polished = boost::math::tools::brent_find_minima(
        objective, best_theta - spacing, best_theta + spacing, 52);
    best = std::min(best, polished.second);
    return sign * best;
  };

  auto g = [&](double th) { return m.g(th); };
  auto h = [&](double th) { return m.h(th); };
  auto c = [&](double th) { return m.c(th); };
  auto damp = [&](double th) { return m.damping(th); };
  auto h_over_g = [&](double th) { return std::abs(m.h(th) / m.g(th)); };

  MaterialBounds b{};
  b.g_L = extremum(g, false);
  b.g_U = extremum(g, true);
  b.h_L = extremum(h, false);
  b.h_U = extremum(h, true);
  b.C_L = extremum(c, false);
  b.C_U = extremum(c, true);
  b.damping_margin = extremum(damp, false);
  b.damping_sup = extremum(damp, true);
  b.h_over_g_sup = extremum(h_over_g, true);

  if (!(b.damping_margin > 0.0)) {
    throw std::runtime_error("material violates the damping bound: min(gamma1 - h^2/g) = " +
                             std::to_string(b.damping_margin));
  }
  return b;
}

LeslieMaterial preset(std::string_view name) {
  if (name == "special") {
    return {{0.0, -1.0, 1.0, 1.0, 0.0, 0.0}, 2.0, 0.0, 1.0, 2.0};
  }
  if (name == "general") {
    return {{0.0, -2.0, 1.0, 2.0, 1.0, 0.0}, 3.0, -1.0, 1.0, 2.0};
  }
  if (name == "constant-speed") {
    return {{0.0, -1.0, 1.0, 1.0, 0.0, 0.0}, 2.0, 0.0, 1.0, 1.0};
  }
  throw std::invalid_argument("unknown material preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"special", "general", "constant-speed"}; }

}  // namespace cusplab
