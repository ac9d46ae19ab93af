#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "visang/support.hpp"

namespace visang {

/// A weight f on [0, pi] applied to the visual angle, with f(w) = O(w^3) at 0.
struct AngleWeightFunction {
  std::string name;
  std::function<double(double)> f;
  /// Exact derivative if known; otherwise central differences are used.
  std::function<double(double)> derivative;
  /// Leading coefficient c3 in f(w) ~ c3 w^3.
  double cubic_coeff = 0.0;

  double operator()(double w) const { return f(w); }
  double df(double w) const;
};

/// Builds a weight from f (and optionally f'), estimating c3 by Richardson
/// extrapolation of f(h)/h^3.
AngleWeightFunction make_weight(std::string name, std::function<double(double)> f,
                                std::function<double(double)> derivative = {});

namespace weights {

/// lambda (w - sin w).
AngleWeightFunction crofton(double lambda = 1.0);
/// (4/3) sin^3 w: integrates to L^2 over the exterior of a disc.
AngleWeightFunction sin3();
/// sin^3 w / cos^2(w/2): integrates to 4 pi F over the exterior of a disc.
AngleWeightFunction sin3_over_cos2();
/// w^3.
AngleWeightFunction cubic();
/// w^2 (w - sin w).
AngleWeightFunction quintic_crofton();
/// Parsed expression in `w`, differentiated symbolically.
AngleWeightFunction expression(const std::string& text);
/// alpha f + beta g.
AngleWeightFunction combine(double alpha, const AngleWeightFunction& f, double beta, const AngleWeightFunction& g);

}  // namespace weights

struct CubicCheck {
  bool ok;
  double ratio_coarse;  // f(1e-2) / 1e-6
  double ratio_fine;    // f(1e-3) / 1e-9
  double value_at_zero;
};

CubicCheck check_cubic_decay(const AngleWeightFunction& f);

struct Moments {
  double M;                    // int_0^pi f'(w) / (1 - cos w) dw
  std::vector<double> alpha;   // alpha[j-1] = int_0^pi f'(w) j cos(j w) dw
  double f_pi;                 // f(pi)

  double alpha_j(int j) const { return j >= 1 && j <= static_cast<int>(alpha.size()) ? alpha[j - 1] : 0.0; }
};

/// Throws SingularAtZero if f fails the O(w^3) ratio test.
Moments moments(const AngleWeightFunction& f, int j_max);

/// Exterior integral of f(w) as a finite series in the Fourier amplitudes.
double cgr_rhs(const FourierSupport& body, const Moments& m);
double cgr_rhs(const FourierSupport& body, const AngleWeightFunction& f);

struct ExteriorConfig {
  /// R_max = r_max_factor * 2 * max p unless r_max > 0.
  double r_max_factor = 50.0;
  double r_max = 0.0;
  int theta_nodes = 1024;
  double tail_fraction = 0.02;
};

struct ExteriorIntegralResult {
  std::string weight;
  double value = 0.0;   // quadrature part plus tail
  double r_max = 0.0;
  double tail = 0.0;    // c3 int a^3 dtheta / R_max
  int theta_nodes = 0;
  int gauss_nodes = 0;
  int radial_slabs = 0;
};

/// int_{P outside K} f(w(P)) dP for several weights sharing one sweep of the
/// visual-angle field. Trapezoidal in theta, Gauss-Legendre per radial slab
/// from the boundary to R_max, analytic cubic tail beyond.
std::vector<ExteriorIntegralResult> exterior_integrals(const FourierSupport& body,
                                                       std::span<const AngleWeightFunction> weights,
                                                       const ExteriorConfig& cfg = {});

ExteriorIntegralResult exterior_integral(const FourierSupport& body, const AngleWeightFunction& f,
                                         const ExteriorConfig& cfg = {});

struct CroftonCheck {
  double lhs;
  double rhs;  // L^2/2 - pi F
  double relative_error;
  ExteriorIntegralResult integral;
};

CroftonCheck crofton_check(const FourierSupport& body, const ExteriorConfig& cfg = {});

struct UniquenessSample {
  int m;
  double t;  // parameter actually used
  double perimeter;
  double area;
  double integral;
};

struct UniquenessFit {
  std::vector<UniquenessSample> samples;
  double a;
  double b;
  double residual;  // max |I - a L^2 - b F| / max |I|
};

/// Least-squares fit I = a L^2 + b F over the family p = 1 + t cos(m phi).
/// For each m, t is capped at 0.8/(m^2 - 1) so every member stays convex.
UniquenessFit uniqueness_experiment(const AngleWeightFunction& f, std::span<const int> ms, double t,
                                    const ExteriorConfig& cfg = {});

/// Two-parameter least squares I ~ a x + b y, solved in an orthogonalized basis.
std::pair<double, double> fit_two_parameter(std::span<const double> x, std::span<const double> y,
                                            std::span<const double> target);

}  // namespace visang
