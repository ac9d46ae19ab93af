#include "visang/support.hpp"

#include "visang/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace visang {

using std::numbers::pi;

RotatedSupport rotate(const FourierSupport& body, double shift) {
  const int n = body.max_harmonic();
  RotatedSupport out{shift, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  for (int k = 1; k <= n; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^(k+1)
    const double c = std::cos(k * shift), s = std::sin(k * shift);
    out.A[k - 1] = sign * (-body.a(k) * c + body.b(k) * s);
    out.B[k - 1] = sign * (-body.a(k) * s - body.b(k) * c);
  }
  return out;
}

FourierSupport translate(const FourierSupport& body, double u, double v) {
  return body.with_harmonic(1, body.a(1) + u, body.b(1) + v);
}

int check_grid_size(const FourierSupport& body) { return std::max(1024, 16 * body.max_harmonic()); }

GridCheck inspect_grid(const FourierSupport& body) {
  const int n = check_grid_size(body);
  GridCheck g{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity()};
  for (int j = 0; j < n; ++j) {
    const auto v = eval_all(body, 2.0 * pi * j / n);
    g.min_p = std::min(g.min_p, v.p);
    g.max_p = std::max(g.max_p, v.p);
    g.min_radius_of_curvature = std::min(g.min_radius_of_curvature, v.p + v.d2p);
  }
  return g;
}

void check_convexity(const FourierSupport& body) {
  if (!(body.a0() > 0.0)) {
    throw GeometryError(ErrorKind::ConvexityViolation, "mean coefficient a0 must be positive");
  }
  const double margin = 1e-9 * body.a0();
  const GridCheck g = inspect_grid(body);
  if (!(g.min_p > margin)) {
    std::ostringstream os;
    os << "origin not interior: min p = " << g.min_p;
    throw GeometryError(ErrorKind::ConvexityViolation, os.str());
  }
  if (!(g.min_radius_of_curvature > margin)) {
    std::ostringstream os;
    os << "p + p'' not positive: min = " << g.min_radius_of_curvature;
    throw GeometryError(ErrorKind::ConvexityViolation, os.str());
  }
}

double max_support(const FourierSupport& body) { return inspect_grid(body).max_p; }

BodyMetrics metrics(const FourierSupport& body) {
  check_convexity(body);
  return {perimeter(body), area(body), width_function(body)};
}

Eigen::Vector2d boundary_point(const FourierSupport& body, double phi) {
  const auto v = eval_all(body, phi);
  const double c = std::cos(phi), s = std::sin(phi);
  return {v.p * c - v.dp * s, v.p * s + v.dp * c};
}

double radial_function(const FourierSupport& body, double theta) {
  const auto f = [&](double phi) {
    const auto v = eval_all(body, phi);
    return phi + std::atan2(v.dp, v.p) - theta;
  };
  const double phi = roots::find_root(f, theta - 0.5 * pi, theta + 0.5 * pi, 1e-14);
  const auto v = eval_all(body, phi);
  return std::hypot(v.p, v.dp);
}

Projection from_samples(const std::function<double(double)>& g, int max_harmonic, int grid, double tolerance) {
  if (max_harmonic < 0) throw GeometryError(ErrorKind::InvalidArgument, "max_harmonic must be >= 0");
  const int n = grid > 0 ? grid : std::max(64, 64 * max_harmonic);
  if (n < 4 * max_harmonic) {
    throw GeometryError(ErrorKind::InvalidArgument, "grid must have at least 4 * max_harmonic points");
  }
  Eigen::ArrayXd samples(n), phis(n);
  for (int j = 0; j < n; ++j) {
    phis[j] = 2.0 * pi * j / n;
    samples[j] = g(phis[j]);
    if (!(samples[j] > 0.0)) {
      throw GeometryError(ErrorKind::PositivityViolation, "sampled function must be positive");
    }
  }
  const double a0 = samples.mean();
  Eigen::VectorXd a = Eigen::VectorXd::Zero(max_harmonic), b = Eigen::VectorXd::Zero(max_harmonic);
  const double chop = 1e-14 * std::abs(a0);
  for (int k = 1; k <= max_harmonic; ++k) {
    const double ak = 2.0 * (samples * (k * phis).cos()).mean();
    const double bk = 2.0 * (samples * (k * phis).sin()).mean();
    a[k - 1] = std::abs(ak) > chop ? ak : 0.0;
    b[k - 1] = std::abs(bk) > chop ? bk : 0.0;
  }
  FourierSupport body(a0, a, b);
  double dev = 0.0;
  for (int j = 0; j < n; ++j) dev = std::max(dev, std::abs(samples[j] - eval(body, phis[j])));
  if (tolerance >= 0.0 && dev > tolerance) {
    std::ostringstream os;
    os << "projection deviation " << dev << " exceeds " << tolerance;
    throw GeometryError(ErrorKind::ProjectionError, os.str());
  }
  check_convexity(body);
  return {std::move(body), dev};
}

namespace generate {

FourierSupport disc(double radius) {
  if (!(radius > 0.0)) throw GeometryError(ErrorKind::ConvexityViolation, "radius must be positive");
  return FourierSupport::disc(radius);
}

FourierSupport perturbed(int m, double t) {
  if (m < 1) throw GeometryError(ErrorKind::InvalidArgument, "m must be >= 1");
  if (m >= 2 && !(t > 0.0 && t < 1.0 / (m * m - 1))) {
    std::ostringstream os;
    os << "t = " << t << " outside (0, 1/(m^2-1)) = (0, " << 1.0 / (m * m - 1) << ")";
    throw GeometryError(ErrorKind::ConvexityViolation, os.str());
  }
  FourierSupport body = FourierSupport(1.0).with_harmonic(m, t, 0.0);
  check_convexity(body);
  return body;
}

FourierSupport constant_width(double a0, std::span<const OddHarmonic> harmonics) {
  FourierSupport body(a0);
  for (const auto& h : harmonics) {
    if (h.k < 1 || h.k % 2 == 0) {
      throw GeometryError(ErrorKind::InvalidArgument, "constant width bodies take odd harmonics only");
    }
    body = body.with_harmonic(h.k, h.a, h.b);
  }
  check_convexity(body);
  return body;
}

FourierSupport random_constant_width(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(0.2, 1.0), phase(0.0, 2.0 * std::numbers::pi);
  std::vector<OddHarmonic> hs;
  double budget = 0.0;
  for (int k = 3; k <= 7; k += 2) {
    const double c = amp(rng), t = phase(rng);
    hs.push_back({k, c * std::cos(t), c * std::sin(t)});
    budget += (k * k - 1) * c;
  }
  for (auto& h : hs) {
    h.a *= 0.6 / budget;
    h.b *= 0.6 / budget;
  }
  return constant_width(1.0, hs);
}

Projection quarter_symmetric(double c0, double c2, double c6, int max_harmonic) {
  if (!(c0 > std::abs(c2) + std::abs(c6))) {
    throw GeometryError(ErrorKind::PositivityViolation, "need c0 > |c2| + |c6| for p^2 > 0");
  }
  return from_samples(
      [=](double phi) { return std::sqrt(c0 + c2 * std::cos(2.0 * phi) + c6 * std::cos(6.0 * phi)); },
      max_harmonic);
}

}  // namespace generate

}  // namespace visang
