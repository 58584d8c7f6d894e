#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cusplab {

/// Uniform node-centred mesh on [x_min, x_max].
struct Grid {
  double x_min = -4.0;
  double x_max = 5.0;
  std::size_t nx = 32769;

  Grid() = default;
  Grid(double lo, double hi, std::size_t n) : x_min(lo), x_max(hi), nx(n) {
    if (nx < 16) throw std::invalid_argument("grid needs at least 16 nodes");
    if (!(x_max > x_min)) throw std::invalid_argument("grid needs x_max > x_min");
  }

  double dx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  bool contains(double lo, double hi) const { return x_min <= lo && hi <= x_max; }

  bool operator==(const Grid&) const = default;
};

/// Fields at one time level. R and S are the evolved wave variables;
/// theta_t = (R + S)/2 and c(theta) theta_x = (R - S)/2 by definition.
struct State {
  double t = 0.0;
  std::vector<double> theta;
  std::vector<double> u;
  std::vector<double> R;
  std::vector<double> S;

  State() = default;
  explicit State(std::size_t n) : theta(n, 0.0), u(n, 0.0), R(n, 0.0), S(n, 0.0) {}

  std::size_t size() const { return theta.size(); }
  double theta_t(std::size_t i) const { return 0.5 * (R[i] + S[i]); }
};

}  // namespace cusplab
