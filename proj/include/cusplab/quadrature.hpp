#pragma once

#include <cmath>
#include <stdexcept>

namespace cusplab {

struct QuadratureResult {
  double value;
  double error_estimate;  ///< Richardson estimate |S_2n - S_n| / 15
  int panels;
};

/// Composite Simpson on [a, b], doubling the panel count until the Richardson
/// error estimate drops below `tol`. Throws std::runtime_error if `max_panels`
/// is reached first.
template <class F>
QuadratureResult simpson(F&& f, double a, double b, double tol, int min_panels = 8,
                         int max_panels = 1 << 22) {
  if (a == b) return {0.0, 0.0, 0};
  // Keep endpoint, odd and even sums separate so doubling reuses samples.
  int n = min_panels + (min_panels % 2);
  double h = (b - a) / n;
  const double ends = f(a) + f(b);
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < n; ++i) (i % 2 ? odd : even) += f(a + i * h);
  double previous = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);

  while (n < max_panels) {
    n *= 2;
    h *= 0.5;
    even += odd;
    odd = 0.0;
    for (int i = 1; i < n; i += 2) odd += f(a + i * h);
    const double current = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
    const double err = std::abs(current - previous) / 15.0;
    if (err < tol) return {current, err, n};
    previous = current;
  }
  throw std::runtime_error("simpson: tolerance not reached");
}

}  // namespace cusplab
