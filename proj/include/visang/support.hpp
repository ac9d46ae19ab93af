#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "visang/errors.hpp"

namespace visang {

/// Support function of a planar convex body as a truncated Fourier series
///
///   p(phi) = a0 + sum_{k=1}^{K} (a_k cos(k phi) + b_k sin(k phi)).
///
/// Coefficients are stored densely from k = 1 to K (zeros included). The
/// squared amplitude c_k^2 = a_k^2 + b_k^2 is always derived, never stored.
/// Construction does not validate convexity; see check_convexity().
template <typename Scalar>
class BasicFourierSupport {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicFourierSupport() : a0_(Scalar(1)) {}

  explicit BasicFourierSupport(Scalar a0, Vector cos_coeffs = Vector(), Vector sin_coeffs = Vector())
      : a0_(a0), a_(std::move(cos_coeffs)), b_(std::move(sin_coeffs)) {
    const Eigen::Index n = std::max(a_.size(), b_.size());
    if (a_.size() < n) a_.conservativeResizeLike(Vector::Zero(n));
    if (b_.size() < n) b_.conservativeResizeLike(Vector::Zero(n));
    trim();
  }

  static BasicFourierSupport disc(Scalar radius) { return BasicFourierSupport(radius); }

  Scalar a0() const { return a0_; }
  const Vector& cos_coeffs() const { return a_; }
  const Vector& sin_coeffs() const { return b_; }

  /// Largest k with a nonzero coefficient (0 for a disc).
  int max_harmonic() const { return static_cast<int>(a_.size()); }

  Scalar a(int k) const { return k >= 1 && k <= max_harmonic() ? a_[k - 1] : Scalar(0); }
  Scalar b(int k) const { return k >= 1 && k <= max_harmonic() ? b_[k - 1] : Scalar(0); }
  Scalar amplitude_sq(int k) const { return a(k) * a(k) + b(k) * b(k); }

  BasicFourierSupport with_harmonic(int k, Scalar ak, Scalar bk) const {
    Vector a = a_, b = b_;
    if (k > max_harmonic()) {
      a.conservativeResizeLike(Vector::Zero(k));
      b.conservativeResizeLike(Vector::Zero(k));
    }
    a[k - 1] = ak;
    b[k - 1] = bk;
    return BasicFourierSupport(a0_, std::move(a), std::move(b));
  }

  BasicFourierSupport with_a0(Scalar a0) const { return BasicFourierSupport(a0, a_, b_); }

 private:
  void trim() {
    Eigen::Index n = a_.size();
    while (n > 0 && a_[n - 1] == Scalar(0) && b_[n - 1] == Scalar(0)) --n;
    a_.conservativeResize(n);
    b_.conservativeResize(n);
  }

  Scalar a0_;
  Vector a_;
  Vector b_;
};

using FourierSupport = BasicFourierSupport<double>;

template <typename Scalar>
struct SupportValues {
  Scalar p;
  Scalar dp;
  Scalar d2p;
};

/// p, p' and p'' at phi in a single pass (angle-addition recurrence).
template <typename Scalar>
SupportValues<Scalar> eval_all(const BasicFourierSupport<Scalar>& body, Scalar phi) {
  using std::cos;
  using std::sin;
  const Scalar c1 = cos(phi), s1 = sin(phi);
  Scalar ck = c1, sk = s1;
  SupportValues<Scalar> out{body.a0(), Scalar(0), Scalar(0)};
  const auto& a = body.cos_coeffs();
  const auto& b = body.sin_coeffs();
  for (int k = 1; k <= body.max_harmonic(); ++k) {
    const Scalar ak = a[k - 1], bk = b[k - 1];
    const Scalar kk = Scalar(k);
    const Scalar even = ak * ck + bk * sk;
    out.p += even;
    out.dp += kk * (bk * ck - ak * sk);
    out.d2p -= kk * kk * even;
    const Scalar cn = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = cn;
  }
  return out;
}

/// p (order 0), p' (order 1) or p'' (order 2) at phi.
template <typename Scalar>
Scalar eval(const BasicFourierSupport<Scalar>& body, Scalar phi, int order = 0) {
  const auto v = eval_all(body, phi);
  switch (order) {
    case 0: return v.p;
    case 1: return v.dp;
    case 2: return v.d2p;
    default: throw GeometryError(ErrorKind::InvalidArgument, "derivative order must be 0, 1 or 2");
  }
}

/// p sampled on the uniform periodic grid phi_j = 2 pi j / n.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> eval_grid(const BasicFourierSupport<Scalar>& body, int n, int order = 0) {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(n);
  for (int j = 0; j < n; ++j) {
    out[j] = eval(body, Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(j) / Scalar(n), order);
  }
  return out;
}

/// The width a(phi) = p(phi) + p(phi + pi): twice the even part of p.
template <typename Scalar>
BasicFourierSupport<Scalar> width_function(const BasicFourierSupport<Scalar>& body) {
  using Vector = typename BasicFourierSupport<Scalar>::Vector;
  const int n = body.max_harmonic();
  Vector a = Vector::Zero(n), b = Vector::Zero(n);
  for (int k = 2; k <= n; k += 2) {
    a[k - 1] = Scalar(2) * body.a(k);
    b[k - 1] = Scalar(2) * body.b(k);
  }
  return BasicFourierSupport<Scalar>(Scalar(2) * body.a0(), std::move(a), std::move(b));
}

/// Sum of c_k^2 over k >= 1 selected by pred(k).
template <typename Scalar, typename Pred>
Scalar sum_amplitude_sq(const BasicFourierSupport<Scalar>& body, Pred pred) {
  Scalar s(0);
  for (int k = 1; k <= body.max_harmonic(); ++k) {
    if (pred(k)) s += body.amplitude_sq(k);
  }
  return s;
}

template <typename Scalar>
Scalar perimeter(const BasicFourierSupport<Scalar>& body) {
  return Scalar(2) * std::numbers::pi_v<Scalar> * body.a0();
}

/// F = pi a0^2 + (pi/2) sum (1 - k^2) c_k^2.
template <typename Scalar>
Scalar area(const BasicFourierSupport<Scalar>& body) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar s(0);
  for (int k = 1; k <= body.max_harmonic(); ++k) s += Scalar(1 - k * k) * body.amplitude_sq(k);
  return pi * body.a0() * body.a0() + pi / Scalar(2) * s;
}

/// L^2 - 4 pi F = 2 pi^2 sum_{k>=2} (k^2 - 1) c_k^2, evaluated from the harmonics.
template <typename Scalar>
Scalar isoperimetric_deficit(const BasicFourierSupport<Scalar>& body) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar s(0);
  for (int k = 2; k <= body.max_harmonic(); ++k) s += Scalar(k * k - 1) * body.amplitude_sq(k);
  return Scalar(2) * pi * pi * s;
}

struct BodyMetrics {
  double perimeter;
  double area;
  FourierSupport width;

  double width_at(double phi) const { return eval(width, phi); }
};

struct ConstantWidthTest {
  bool constant_width;
  double max_even_amplitude;
};

/// Constant width iff every even harmonic k >= 2 has amplitude <= tol * a0.
template <typename Scalar>
ConstantWidthTest is_constant_width(const BasicFourierSupport<Scalar>& body, Scalar tol = Scalar(1e-12)) {
  Scalar worst(0);
  for (int k = 2; k <= body.max_harmonic(); k += 2) {
    using std::sqrt;
    worst = std::max(worst, sqrt(body.amplitude_sq(k)));
  }
  return {worst <= tol * body.a0(), static_cast<double>(worst)};
}

/// Coefficients of p(phi + pi - shift), written as a0 + sum A_k cos + B_k sin.
struct RotatedSupport {
  double shift;
  Eigen::VectorXd A;
  Eigen::VectorXd B;

  FourierSupport as_support(double a0) const { return FourierSupport(a0, A, B); }
};

RotatedSupport rotate(const FourierSupport& body, double shift);

/// Translating the body by (u, v) adds u cos(phi) + v sin(phi) to p.
FourierSupport translate(const FourierSupport& body, double u, double v);

struct GridCheck {
  double min_p;
  double min_radius_of_curvature;  // min of p + p''
  double max_p;
};

/// Size of the uniform grid used for positivity and convexity checks.
int check_grid_size(const FourierSupport& body);

GridCheck inspect_grid(const FourierSupport& body);

/// Throws ConvexityViolation unless p > margin and p + p'' > margin on the
/// check grid, margin = 1e-9 a0.
void check_convexity(const FourierSupport& body);

/// max_phi p(phi) over the check grid.
double max_support(const FourierSupport& body);

BodyMetrics metrics(const FourierSupport& body);

/// Boundary point with outward normal phi: (p cos - p' sin, p sin + p' cos).
Eigen::Vector2d boundary_point(const FourierSupport& body, double phi);

/// Distance from the origin to the boundary along the ray of polar angle theta.
/// Inverts theta = phi + atan2(p', p), which is increasing for convex bodies.
double radial_function(const FourierSupport& body, double theta);

struct Projection {
  FourierSupport body;
  double max_deviation;
};

/// Discrete Fourier projection of a positive periodic function onto degree
/// max_harmonic. Coefficients below 1e-14 a0 are dropped.
/// `tolerance` < 0 disables the ProjectionError check.
Projection from_samples(const std::function<double(double)>& g, int max_harmonic = 16, int grid = 0,
                        double tolerance = -1.0);

namespace generate {

FourierSupport disc(double radius = 1.0);

/// p = 1 + t cos(m phi); needs 0 < t < 1/(m^2 - 1) for m >= 2.
FourierSupport perturbed(int m, double t);

struct OddHarmonic {
  int k;
  double a;
  double b;
};

/// a0 plus odd harmonics only; constant width 2 a0.
FourierSupport constant_width(double a0, std::span<const OddHarmonic> harmonics);

/// a0 = 1 with random odd harmonics k = 3, 5, 7 scaled so sum (k^2 - 1) c_k = 0.6.
FourierSupport random_constant_width(std::mt19937_64& rng);

/// p = sqrt(c0 + c2 cos 2phi + c6 cos 6phi): p^2 has harmonics only at k = 2 mod 4,
/// so the body sees a circle of radius sqrt(2 c0) at angle pi/2.
Projection quarter_symmetric(double c0 = 21.5, double c2 = 2.5, double c6 = 1.0, int max_harmonic = 16);

}  // namespace generate

}  // namespace visang
