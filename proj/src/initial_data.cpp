#include "cusplab/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cusplab/quadrature.hpp"

namespace cusplab {

namespace {

constexpr double kQuadratureTol = 1e-10;

std::string format(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(ProfileFamily family) {
  return family == ProfileFamily::theorem ? "theorem" : "smooth";
}

ProfileFamily profile_family_from(const std::string& name) {
  if (name == "theorem") return ProfileFamily::theorem;
  if (name == "smooth") return ProfileFamily::smooth;
  throw std::invalid_argument("unknown profile family '" + name + "' (theorem, smooth)");
}

double phi(const InitialDataSpec& spec, double a) {
  if (std::abs(a) >= 1.0) return 0.0;
  const double q = 1.0 - a * a;
  return -spec.amplitude * a * q * q;
}

double phi_prime(const InitialDataSpec& spec, double a) {
  if (std::abs(a) >= 1.0) return 0.0;
  const double a2 = a * a;
  return -spec.amplitude * (1.0 - a2) * (1.0 - 5.0 * a2);
}

double amplitude_threshold(const LeslieMaterial& material, double theta_star) {
  const double cp = material.c_prime(theta_star);
  if (!(cp > 0.0)) {
    throw std::domain_error("c'(theta*) = " + format(cp) + " is not positive");
  }
  const MaterialBounds b = bounds_of(material);
  const double first = 16.0 * b.C_U * b.damping_sup / (cp * b.C_L * std::numbers::ln2);
  const double second = std::exp(b.damping_sup) / b.C_L;
  return std::max(first, second);
}

void check_hypotheses(const InitialDataSpec& spec, const LeslieMaterial& material) {
  if (!(spec.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive, got " + format(spec.epsilon));
  }
  if (spec.family == ProfileFamily::smooth) {
    if (!(spec.smooth_amplitude > 0.0)) {
      throw std::invalid_argument("smooth_amplitude must be positive");
    }
    return;
  }
  if (!(spec.amplitude > 0.0)) {
    throw std::invalid_argument("amplitude must be positive, got " + format(spec.amplitude));
  }
  if (!(spec.amplitude_slack >= 1.0)) {
    throw std::invalid_argument("amplitude_slack must be >= 1");
  }
  if (!spec.enforce_hypotheses) return;

  const double cp = material.c_prime(spec.theta_star);
  if (!(cp > 0.0)) {
    throw std::invalid_argument("c'(theta*) = " + format(cp) + " must be positive");
  }
  const double m_min = amplitude_threshold(material, spec.theta_star);
  if (spec.amplitude < spec.amplitude_slack * m_min) {
    throw std::invalid_argument("amplitude " + format(spec.amplitude) + " is below " +
                                format(spec.amplitude_slack) + " x M_min = " +
                                format(spec.amplitude_slack * m_min));
  }
  const double energy = spec.amplitude * spec.amplitude * kProfileEnergyConstant;
  if (!(energy < spec.k0)) {
    throw std::invalid_argument("int phi'^2 = " + format(energy) + " is not below k0 = " +
                                format(spec.k0));
  }
  if (!(spec.epsilon < material.c(spec.theta_star))) {
    throw std::invalid_argument("epsilon must be below c(theta*)");
  }
}

InitialDataSpec make_theorem_spec(const LeslieMaterial& material, double epsilon,
                                  double theta_star, std::optional<double> amplitude,
                                  double amplitude_slack, bool enforce_hypotheses) {
  InitialDataSpec spec;
  spec.family = ProfileFamily::theorem;
  spec.epsilon = epsilon;
  spec.theta_star = theta_star;
  spec.amplitude_slack = amplitude_slack;
  spec.enforce_hypotheses = enforce_hypotheses;
  spec.amplitude = amplitude ? *amplitude
                             : std::ceil(amplitude_slack * amplitude_threshold(material, theta_star));
  spec.C2 = spec.amplitude;
  spec.k0 = 2.0 * spec.amplitude * spec.amplitude * kProfileEnergyConstant + 1.0;
  check_hypotheses(spec, material);
  return spec;
}

double chi_integral(const InitialDataSpec& spec, const LeslieMaterial& material) {
  if (spec.family != ProfileFamily::theorem) return 0.0;
  const double eps = spec.epsilon;
  auto integrand = [&](double a) {
    const Coefficients co = material.coefficients(spec.theta_star + eps * phi(spec, a / eps));
    return co.h / co.g * co.c * phi_prime(spec, a / eps);
  };
  return simpson(integrand, -eps, eps, kQuadratureTol).value;
}

ChiCoefficients chi_build(const InitialDataSpec& spec, const LeslieMaterial& material) {
  return chi_from_integral(spec.epsilon, chi_integral(spec, material));
}

ChiCoefficients chi_from_integral(double e, double I) {
  ChiCoefficients chi;
  chi.left = e;
  chi.right = e + 2.0;
  chi.integral = I;
  // Hermite cubic with value I and zero slope at e, zero value and slope at e + 2.
  chi.c3 = I * 0.25;
  chi.c2 = -I * 0.75 * (e + 1.0);
  chi.c1 = I * 0.75 * e * (e + 2.0);
  chi.c0 = -I * 0.25 * (e - 1.0) * (e + 2.0) * (e + 2.0);
  return chi;
}

InitialProfile::InitialProfile(const InitialDataSpec& spec, const LeslieMaterial& material)
    : spec_(spec), material_(material), chi_(chi_build(spec, material)) {}

double InitialProfile::support_left() const {
  return spec_.family == ProfileFamily::theorem ? -spec_.epsilon : -2.0;
}

double InitialProfile::support_right() const {
  return spec_.family == ProfileFamily::theorem ? spec_.epsilon + 2.0 : 2.0;
}

double InitialProfile::theta0(double x) const { return cusplab::theta0(spec_, x); }

double InitialProfile::theta0_prime(double x) const {
  if (spec_.family == ProfileFamily::smooth) {
    if (std::abs(x) > 2.0) return 0.0;
    return 0.5 * std::numbers::pi * spec_.smooth_amplitude * std::sin(std::numbers::pi * x);
  }
  return phi_prime(spec_, x / spec_.epsilon);
}

double InitialProfile::theta1(double x) const {
  if (spec_.family == ProfileFamily::smooth) return 0.0;
  return (spec_.epsilon - material_.c(theta0(x))) * phi_prime(spec_, x / spec_.epsilon);
}

double InitialProfile::u0_integrand(double a) const {
  const Coefficients co = material_.coefficients(theta0(a));
  return co.h / co.g * co.c * theta0_prime(a);
}

double InitialProfile::u0(double x) const {
  if (spec_.family == ProfileFamily::smooth) return 0.0;
  const double e = spec_.epsilon;
  if (x <= -e || x >= chi_.right) return 0.0;
  if (x <= e) {
    return simpson([this](double a) { return u0_integrand(a); }, -e, x, kQuadratureTol).value;
  }
  return chi_.value(x);
}

double InitialProfile::u0_prime(double x) const {
  if (spec_.family == ProfileFamily::smooth) return 0.0;
  const double e = spec_.epsilon;
  if (x <= -e || x >= chi_.right) return 0.0;
  if (x <= e) return u0_integrand(x);
  return chi_.derivative(x);
}

double theta0(const InitialDataSpec& spec, double x) {
  if (spec.family == ProfileFamily::smooth) {
    if (std::abs(x) > 2.0) return spec.theta_star;
    const double s = std::sin(0.5 * std::numbers::pi * x);
    return spec.theta_star + spec.smooth_amplitude * s * s;
  }
  return spec.theta_star + spec.epsilon * phi(spec, x / spec.epsilon);
}

double theta1(const InitialDataSpec& spec, const LeslieMaterial& material, double x) {
  return InitialProfile(spec, material).theta1(x);
}

double u0(const InitialDataSpec& spec, const LeslieMaterial& material, double x) {
  return InitialProfile(spec, material).u0(x);
}

InitialState build_initial_state(const InitialDataSpec& spec, const LeslieMaterial& material,
                                 const Grid& grid, double t_end) {
  check_hypotheses(spec, material);
  const MaterialBounds bounds = bounds_of(material);
  const InitialProfile profile(spec, material);

  const double margin = bounds.C_U * t_end + 1.0;
  const double need_lo = profile.support_left() - margin;
  const double need_hi = profile.support_right() + margin;
  if (!grid.contains(need_lo, need_hi)) {
    throw std::invalid_argument("grid [" + format(grid.x_min) + ", " + format(grid.x_max) +
                                "] does not cover [" + format(need_lo) + ", " +
                                format(need_hi) + "]");
  }

  const std::size_t n = grid.nx;
  InitialState out{State(n), {}};
  State& st = out.state;
  const double e = spec.epsilon;
  // u0 on [-eps, eps] by accumulating Simpson over consecutive node intervals.
  double running = 0.0;
  double last_x = -e;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    const double th = profile.theta0(x);
    const double c = material.c(th);
    const double th_x = profile.theta0_prime(x);
    const double th_t = profile.theta1(x);
    st.theta[i] = th;
    st.R[i] = th_t + c * th_x;
    st.S[i] = th_t - c * th_x;

    if (spec.family == ProfileFamily::smooth || x <= -e || x >= profile.chi().right) {
      st.u[i] = 0.0;
    } else if (x <= e) {
      running += simpson([&profile](double a) { return profile.u0_prime(a); }, last_x, x,
                         1e-13)
                     .value;
      last_x = x;
      st.u[i] = running;
    } else {
      st.u[i] = profile.chi().value(x);
    }
  }

  const DiagnosticsRecord rec = measure(st, material, grid);
  InitialReport& rep = out.report;
  rep.energy = rec.energy;
  rep.sup_J = rec.sup_abs_J;
  rep.sup_R = rec.sup_abs_R;
  rep.sup_S = rec.sup_abs_S;
  rep.S_origin = profile.theta1(0.0) - material.c(profile.theta0(0.0)) * profile.theta0_prime(0.0);

  if (spec.family == ProfileFamily::theorem) {
    rep.J_bound = bounds.h_over_g_sup * std::max(1.0, 1.5 * bounds.C_U) * spec.amplitude * e;
    const double cp = material.c_prime(spec.theta_star);
    if (spec.enforce_hypotheses && cp > 0.0 && e < material.c(spec.theta_star)) {
      const double need =
          std::max(16.0 * bounds.C_U * bounds.damping_sup / (cp * std::numbers::ln2),
                   std::exp(bounds.damping_sup));
      if (!(rep.S_origin > need)) {
        throw std::logic_error("S(0,0) = " + format(rep.S_origin) + " does not exceed " +
                               format(need));
      }
    }
  }
  return out;
}

}  // namespace cusplab
