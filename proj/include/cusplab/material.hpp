#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace cusplab {

/// Pointwise coefficients of the director/flow system at one angle.
struct Coefficients {
  double g;        ///< flow viscosity g(theta)
  double h;        ///< coupling h(theta)
  double c;        ///< wave speed c(theta)
  double c_prime;  ///< dc/dtheta
};

/// Leslie viscosities plus Oseen-Frank elastic constants.
///
/// Immutable after construction. The alpha array is indexed from zero, so
/// alpha[0] is alpha1 and alpha[5] is alpha6.
struct LeslieMaterial {
  std::array<double, 6> alpha{};
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double K1 = 0.0;
  double K3 = 0.0;

  double g(double theta) const;
  double h(double theta) const;
  /// h through the (gamma1 + gamma2 cos 2theta)/2 form; agrees with h() when
  /// the compatibility relations hold.
  double h_gamma_form(double theta) const;
  /// Throws std::domain_error if K1 cos^2 + K3 sin^2 <= 0.
  double c(double theta) const;
  double c_prime(double theta) const;
  /// g - h^2/gamma1, the coefficient of u_x^2 in the dissipation.
  double b(double theta) const;
  /// gamma1 - h^2/g, the effective damping rate of the wave part.
  double damping(double theta) const;

  /// All four coefficients from a single sincos evaluation.
  Coefficients coefficients(double theta) const;

  bool operator==(const LeslieMaterial&) const = default;
};

struct Violation {
  std::string relation;
  /// Signed slack: for an inequality lhs > rhs this is lhs - rhs, for an
  /// equality it is lhs - rhs as well.
  double slack;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;

  bool violates(std::string_view relation) const;
};

/// Checks the compatibility relations, Parodi's relation, the empirical
/// inequalities on the viscosities and positivity of K1, K3.
ValidationReport validate(const LeslieMaterial& material);

struct MaterialBounds {
  double g_L, g_U;
  double h_L, h_U;
  double C_L, C_U;
  double damping_margin;  ///< min over theta of gamma1 - h^2/g
  double damping_sup;     ///< max over theta of gamma1 - h^2/g
  double h_over_g_sup;    ///< max over theta of |h/g|
};

inline constexpr int kDefaultBoundSamples = 4096;

/// Extrema over theta in [0, pi) by dense sampling plus local refinement of
/// every sampled extremum. Throws std::invalid_argument if n_samples < 64 and
/// std::runtime_error if the damping margin is not positive.
MaterialBounds bounds_of(const LeslieMaterial& material,
                         int n_samples = kDefaultBoundSamples);

/// Named reference materials: "special", "general", "constant-speed".
/// Throws std::invalid_argument on an unknown name.
LeslieMaterial preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace cusplab
