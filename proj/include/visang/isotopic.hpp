#pragma once

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

#include "visang/support.hpp"

namespace visang {

/// The isotopic set C_alpha: points from which the body subtends the angle alpha.
///
/// The point with parameter phi is where the support lines with normals phi
/// and phi + pi - alpha meet:
///   X = -(p sin(phi - alpha) + p1 sin phi) / sin alpha
///   Y =  (p cos(phi - alpha) + p1 cos phi) / sin alpha,   p1 = p(phi + pi - alpha).
struct IsotopicCurve {
  double alpha = 0.0;
  int grid = 0;
  Eigen::Matrix2Xd points;
  Eigen::Matrix2Xd tangents;  // d(X, Y)/dphi
  /// Delta(phi, alpha) = sin^2(alpha) |d(X, Y)/dphi|^2.
  Eigen::ArrayXd radicand;
  /// (1/sin alpha) int sqrt(Delta) dphi.
  double length = 0.0;
  /// (1/2) int (X Y' - Y X') dphi.
  double area = 0.0;

  double polyline_length() const;
  double polygon_area() const;
};

IsotopicCurve curve(const FourierSupport& body, double alpha, int grid = 2048);

/// Largest |w(P) - alpha| over `count` evenly spaced points of the curve,
/// measured with the tangent solver.
double visual_angle_spot_check(const FourierSupport& body, const IsotopicCurve& c, int count = 16);

struct IsotopicLimits {
  /// lim L(alpha) sin(alpha) = int sqrt(a^2 + a'^2) dphi
  double length_sin;
  /// lim F(alpha) sin^2(alpha) = L^2/pi + 2 pi sum_{k even} c_k^2
  double area_sin2;
  /// [int sqrt(a^2 + a'^2)]^2 / (2 pi int a^2)
  double ratio;
  /// 2 pi int a^2 dphi, which equals 4 L^2 + 8 pi^2 sum_{k even} c_k^2.
  double width_square_integral;

  std::array<double, 3> alphas{0.2, 0.1, 0.05};
  std::array<double, 3> sampled_length_sin{};
  std::array<double, 3> sampled_area_sin2{};
  std::array<double, 3> sampled_ratio{};
  /// Quadratic extrapolation of the sampled values to alpha = 0.
  double extrapolated_length_sin = 0.0;
  double extrapolated_area_sin2 = 0.0;
  double extrapolated_ratio = 0.0;
};

IsotopicLimits limits(const FourierSupport& body, int grid = 2048);

/// Candidate isotopic circle. `center` is in the body's own frame.
struct CircleFit {
  double alpha = 0.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;
  /// max_phi |dist(center, C_alpha(phi)) - radius| / radius
  double deviation = 0.0;
};

/// Relative deviation below which a fit certifies an isotopic circle.
inline constexpr double kCircleThreshold = 1e-6;

/// C_alpha is an origin-centred circle of radius R iff
/// p^2 + p1^2 + 2 p p1 cos(alpha) = R^2 sin^2(alpha) for all phi. With
/// `search`, the centre is optimized by translating the body within +-a0/2.
CircleFit detect_circle(const FourierSupport& body, double alpha, bool search = false, int grid = 1024);

struct QuarterConstruction {
  FourierSupport body;
  double projection_error;
  double expected_radius;  // sqrt(2 c0)
  CircleFit fit;
};

/// p = sqrt(c0 + c2 cos 2phi + c6 cos 6phi), projected to max_harmonic, with
/// its isotopic circle at alpha = pi/2 verified.
QuarterConstruction construct_quarter(double c0, double c2, double c6, int max_harmonic = 16);

/// g_k(alpha) = 1 + ((-1)^k / 2) ((k+1) cos((k-1) alpha) - (k-1) cos((k+1) alpha)).
double hurwitz_g(int k, double alpha);

/// alpha = pi - (m/n) pi with gcd(m, n) = 1, m odd and 0 < m < n.
/// Throws RationalityViolation otherwise.
double admissible_alpha(int m, int n);

/// Throws PeriodicityViolation unless every harmonic with n not dividing k vanishes.
void check_periodicity(const FourierSupport& body, int n);

struct AreaSeries {
  double alpha;
  double area;
  /// F + pi/(4 cos^2(alpha/2)) sum (2(k^2 +- 1) cos^2(alpha/2) + g_k) c_k^2
  double prediction_plus;
  double prediction_minus;
  /// F(alpha) sin^2(alpha/2) from the traced curve.
  double oracle;
  /// +1 or -1: the variant closer to the oracle.
  int selected_sign;
  double selected_relative_error;
  double rejected_relative_error;
};

AreaSeries area_series(const FourierSupport& body, int m, int n, int grid = 2048);

struct ProductIntegral {
  double closed_form;  // L^2/(2 pi) - pi sum (-1)^(k+1) c_k^2 cos(k alpha)
  double quadrature;
};

/// int_0^{2 pi} p(phi) p(phi + pi - alpha) dphi.
ProductIntegral pp1_integral(const FourierSupport& body, double alpha);

struct CircleIdentity {
  double alpha;
  double radius;
  /// L^2 + 2 pi^2 sum_{mu even} c_{n mu}^2 + 2 pi^2 tan^2(alpha/2) sum_{mu odd} c_{n mu}^2
  double lhs;
  /// (2 pi R)^2 sin^2(alpha/2)
  double rhs;
  double residual;
  double perimeter;
  double perimeter_bound;  // 2 pi R sin(alpha/2)
  double area;
  double area_bound;       // pi R^2 sin^2(alpha/2)
  bool perimeter_holds;
  bool area_holds;
};

/// Throws NoIsotopicCircle unless fit.deviation <= kCircleThreshold.
CircleIdentity perimeter_identity(const FourierSupport& body, int m, int n, const CircleFit& fit);
CircleIdentity perimeter_identity(const FourierSupport& body, int m, int n);

struct DiscTestReport {
  std::vector<double> alphas;
  std::vector<double> deviations;
  double min_deviation;
  double alpha_at_min;
  double noise_floor;  // worst deviation of the disc with the same a0 and settings
  double threshold;    // 10 * noise_floor
  bool counterexample;
};

/// Uniform grid alpha_i = pi (i + 1/2) / n.
std::vector<double> alpha_grid(int n = 64);

/// Sweeps detect_circle over the alphas for a constant-width body and flags a
/// counterexample if any deviation is within 10x the disc noise floor while
/// the body has nonzero harmonics. Throws NotConstantWidth.
DiscTestReport constant_width_disc_test(const FourierSupport& body, std::span<const double> alphas,
                                        bool search = true, int grid = 1024);

}  // namespace visang
