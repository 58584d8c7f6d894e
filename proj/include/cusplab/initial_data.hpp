#pragma once

#include <numbers>
#include <optional>
#include <string>

#include "cusplab/diagnostics.hpp"
#include "cusplab/grid.hpp"
#include "cusplab/material.hpp"

namespace cusplab {

/// Which family of initial data to build.
enum class ProfileFamily {
  /// Compressive bump that forms a cusp: theta0 = theta* + eps phi(x/eps).
  theorem,
  /// Low-amplitude C^1 data for scheme verification:
  /// theta0 = theta* + A sin^2(pi x/2) on |x| <= 2, theta1 = 0, u0 = 0.
  smooth,
};

std::string to_string(ProfileFamily family);
ProfileFamily profile_family_from(const std::string& name);

struct InitialDataSpec {
  ProfileFamily family = ProfileFamily::theorem;
  double epsilon = 0.05;
  double theta_star = 0.25 * std::numbers::pi;
  double amplitude = 0.0;  ///< M = -phi'(0)
  double C2 = 0.0;         ///< bound on |phi'|; equals M for the bump profile
  double k0 = 0.0;         ///< strict upper bound on int phi'^2
  double amplitude_slack = 1.1;
  /// When false the amplitude threshold and c'(theta*) > 0 are not checked
  /// (control runs on materials without a quasilinear speed).
  bool enforce_hypotheses = true;
  double smooth_amplitude = 0.1;  ///< A of the smooth family

  bool operator==(const InitialDataSpec&) const = default;
};

/// int_{-1}^{1} ((1 - a^2)(1 - 5a^2))^2 da, i.e. int phi'^2 = M^2 times this.
inline constexpr double kProfileEnergyConstant = 256.0 / 315.0;

/// phi(a) = -M a (1 - a^2)^2 on |a| <= 1 and zero outside.
double phi(const InitialDataSpec& spec, double a);
double phi_prime(const InitialDataSpec& spec, double a);

/// Smallest admissible -phi'(0):
/// max{16 C_U |gamma1 - h^2/g|_inf / (c'(theta*) C_L ln 2), exp(|gamma1 - h^2/g|_inf) / C_L}.
/// Throws std::domain_error if c'(theta*) <= 0.
double amplitude_threshold(const LeslieMaterial& material, double theta_star);

/// Fills M (auto: ceil(slack * M_min)), C2 and k0, then checks the
/// hypotheses. Throws std::invalid_argument when a hypothesis fails.
InitialDataSpec make_theorem_spec(const LeslieMaterial& material, double epsilon,
                                  double theta_star, std::optional<double> amplitude,
                                  double amplitude_slack = 1.1, bool enforce_hypotheses = true);

/// Throws std::invalid_argument naming the first violated hypothesis.
void check_hypotheses(const InitialDataSpec& spec, const LeslieMaterial& material);

/// Cubic connector of u0 on [eps, eps + 2]: value I = int_{-eps}^{eps} (h/g) c theta0' da
/// and zero slope at x = eps, zero value and slope at x = eps + 2.
struct ChiCoefficients {
  double c3 = 0.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;
  double left = 0.0, right = 0.0;  ///< interval [eps, eps + 2]
  double integral = 0.0;           ///< I, the value matched at x = eps

  double value(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
  double derivative(double x) const { return (3.0 * c3 * x + 2.0 * c2) * x + c1; }
};

/// int_{-eps}^{eps} (h/g)(theta0) c(theta0) theta0' da by adaptive Simpson.
double chi_integral(const InitialDataSpec& spec, const LeslieMaterial& material);
ChiCoefficients chi_build(const InitialDataSpec& spec, const LeslieMaterial& material);
/// The Hermite cubic for a given value I at x = epsilon.
ChiCoefficients chi_from_integral(double epsilon, double integral);

/// Evaluates theta0, theta1, u0 for a fixed spec and material; caches chi.
class InitialProfile {
 public:
  InitialProfile(const InitialDataSpec& spec, const LeslieMaterial& material);

  double theta0(double x) const;
  double theta0_prime(double x) const;
  double theta1(double x) const;
  /// Four-branch u0; the integral branch uses adaptive Simpson from -eps.
  double u0(double x) const;
  double u0_prime(double x) const;

  /// Support of the data: theta1 and u0 vanish outside, theta0 equals theta*.
  double support_left() const;
  double support_right() const;

  const ChiCoefficients& chi() const { return chi_; }
  const InitialDataSpec& spec() const { return spec_; }

 private:
  double u0_integrand(double a) const;

  InitialDataSpec spec_;
  LeslieMaterial material_;
  ChiCoefficients chi_;
};

double theta0(const InitialDataSpec& spec, double x);
double theta1(const InitialDataSpec& spec, const LeslieMaterial& material, double x);
double u0(const InitialDataSpec& spec, const LeslieMaterial& material, double x);

struct InitialReport {
  double energy = 0.0;
  double sup_J = 0.0;
  double sup_R = 0.0;
  double sup_S = 0.0;
  double S_origin = 0.0;  ///< S(0, 0)
  /// Analytic bound sup(h/g) max(1, 3/2 C_U) M eps on |J(., 0)| (theorem family).
  double J_bound = 0.0;
};

struct InitialState {
  State state;
  InitialReport report;
};

/// Samples the data on the grid. Throws std::invalid_argument if the grid does
/// not cover the data support with a margin of C_U t_end + 1 on each side.
InitialState build_initial_state(const InitialDataSpec& spec, const LeslieMaterial& material,
                                 const Grid& grid, double t_end);

}  // namespace cusplab
