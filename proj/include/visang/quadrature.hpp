#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cstddef>
#include <numbers>

namespace visang::quad {

/// Trapezoidal rule over one period of a 2 pi-periodic function on the grid
/// phi_j = 2 pi j / n. Spectrally accurate for smooth integrands.
template <typename F>
double periodic_trapezoid(F&& f, int n) {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += f(2.0 * std::numbers::pi * j / n);
  return 2.0 * std::numbers::pi * s / n;
}

/// Full Gauss-Legendre rule on [-1, 1], expanded from Boost's half-range tables.
template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    using Rule = boost::math::quadrature::gauss<double, N>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    std::size_t i = 0;
    for (std::size_t j = x.size(); j-- > 0;) {
      if (x[j] == 0.0) continue;
      nodes[i] = -x[j];
      weights[i++] = w[j];
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
      nodes[i] = x[j];
      weights[i++] = w[j];
    }
  }

  static const GaussLegendre& instance() {
    static const GaussLegendre rule;
    return rule;
  }

  /// Integral of f over [a, b].
  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += weights[i] * f(mid + half * nodes[i]);
    return half * s;
  }

  /// Composite rule with `panels` equal sub-intervals.
  template <typename F>
  double integrate(F&& f, double a, double b, int panels) const {
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) s += integrate(f, a + p * h, a + (p + 1) * h);
    return s;
  }
};

}  // namespace visang::quad
