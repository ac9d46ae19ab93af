#include "visang/angle.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "visang/quadrature.hpp"
#include "visang/roots.hpp"

namespace visang {

using std::numbers::pi;

namespace {

double wrap_two_pi(double x) {
  x = std::fmod(x, 2.0 * pi);
  return x < 0.0 ? x + 2.0 * pi : x;
}

double safe_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

}  // namespace

// ---------------------------------------------------------------------------
// Tangent solver

TangentSolver::TangentSolver(const FourierSupport& body, double abs_tol)
    : body_(body), abs_tol_(abs_tol), cells_(4 * std::max(64, 8 * body.max_harmonic())) {
  cos_.resize(cells_);
  sin_.resize(cells_);
  p_.resize(cells_);
  for (int i = 0; i < cells_; ++i) {
    const double phi = 2.0 * pi * i / cells_;
    cos_[i] = std::cos(phi);
    sin_[i] = std::sin(phi);
    p_[i] = eval(body_, phi);
  }
}

double TangentSolver::h(const Eigen::Vector2d& point, double phi) const {
  return point.x() * std::cos(phi) + point.y() * std::sin(phi) - eval(body_, phi);
}

TangentNormals TangentSolver::normals(const Eigen::Vector2d& point) const {
  const Eigen::ArrayXd hg = point.x() * cos_ + point.y() * sin_ - p_;
  const double step = 2.0 * pi / cells_;
  const auto at = [&](long i) { return hg[((i % cells_) + cells_) % cells_]; };

  Eigen::Index best = 0;
  double inner_phi = 0.0;
  double inner_h = hg.maxCoeff(&best);
  inner_phi = best * step;

  if (!(inner_h > 0.0)) {
    // The positive arc may be narrower than one cell: refine every grid-local
    // maximum and keep the best.
    inner_h = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < cells_; ++i) {
      if (at(i) < at(i - 1) || at(i) < at(i + 1)) continue;
      const auto neg_h = [&](double phi) { return -h(point, phi); };
      const auto [phi_max, neg] = boost::math::tools::brent_find_minima(neg_h, (i - 1) * step, (i + 1) * step, 50);
      if (-neg > inner_h) {
        inner_h = -neg;
        inner_phi = phi_max;
      }
    }
    const double scale = abs_tol_ * (point.norm() + std::abs(body_.a0()));
    if (std::abs(inner_h) <= scale) {
      throw GeometryError(ErrorKind::DegenerateTangency, "point lies on the boundary within tolerance");
    }
    if (inner_h < 0.0) {
      throw GeometryError(ErrorKind::PointInsideBody, "no support line separates the point from the body");
    }
  }

  const auto hf = [&](double phi) { return h(point, phi); };
  const long centre = static_cast<long>(std::floor(inner_phi / step));

  // Walk from the interior point to the first non-positive node on each side.
  // Grid values steer the walk; the exact h decides the bracket end.
  const auto walk = [&](long start, long dir, double& inner, double& f_inner) {
    long i = start;
    bool moved = false;
    for (long n = 0; n < cells_; ++n, i += dir) {
      if (at(i) <= 0.0) {
        const double f = hf(i * step);
        if (f <= 0.0) {
          if (moved) f_inner = hf(inner);
          return std::pair{i * step, f};
        }
      }
      inner = i * step;
      moved = true;
    }
    throw GeometryError(ErrorKind::PointInsideBody, "positive arc covers the whole circle");
  };

  double hi = inner_phi, f_hi = inner_h;
  long left_start = centre;
  if (left_start * step == inner_phi) --left_start;
  const auto [left, f_left] = walk(left_start, -1, hi, f_hi);
  const double first = roots::find_root(hf, left, hi, f_left, f_hi, abs_tol_);

  double lo = inner_phi, f_lo = inner_h;
  const auto [right, f_right] = walk(centre + 1, +1, lo, f_lo);
  const double second = roots::find_root(hf, lo, right, f_lo, f_right, abs_tol_);
  return {first, second};
}

VisualAngleSample TangentSolver::operator()(const Eigen::Vector2d& point) const {
  const TangentNormals n = normals(point);
  VisualAngleSample s;
  s.R = point.norm();
  s.theta = wrap_two_pi(std::atan2(point.y(), point.x()));
  s.phi = wrap_two_pi(n.first);
  s.w = pi - (n.second - n.first);
  const double p = eval(body_, n.first), p1 = eval(body_, n.second);
  s.relation_residual =
      std::abs(p * p + p1 * p1 + 2.0 * p * p1 * std::cos(s.w) - s.R * s.R * std::pow(std::sin(s.w), 2)) /
      (s.R * s.R);
  return s;
}

double TangentSolver::angle(const Eigen::Vector2d& point) const {
  const TangentNormals n = normals(point);
  return pi - (n.second - n.first);
}

VisualAngleSample visual_angle_point(const FourierSupport& body, const Eigen::Vector2d& point) {
  return TangentSolver(body)(point);
}

// ---------------------------------------------------------------------------
// Circle coordinates

CircleCoordinates::CircleCoordinates(const FourierSupport& body, double R, AngleOptions options)
    : body_(body), R_(R), options_(std::move(options)) {
  const int n = check_grid_size(body_);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * pi * j / n;
    const auto v = eval_all(body_, phi);
    if (!(v.p < R_)) {
      std::ostringstream os;
      os << "R = " << R_ << " does not exceed max p (p = " << v.p << " at phi = " << phi << ")";
      throw GeometryError(ErrorKind::CircleTooSmall, os.str());
    }
    if (!(1.0 - v.dp / std::sqrt(R_ * R_ - v.p * v.p) > 0.0)) {
      std::ostringstream os;
      os << "theta(phi) is not monotone on the circle R = " << R_;
      throw GeometryError(ErrorKind::CircleTooSmall, os.str());
    }
  }
}

Eigen::Vector2d CircleCoordinates::point(double phi) const {
  const double p = eval(body_, phi);
  const double t = std::sqrt(R_ * R_ - p * p);
  return {p * std::cos(phi) - t * std::sin(phi), p * std::sin(phi) + t * std::cos(phi)};
}

double CircleCoordinates::theta(double phi) const { return phi + safe_acos(eval(body_, phi) / R_); }

double CircleCoordinates::jacobian(double phi) const {
  const auto v = eval_all(body_, phi);
  return 1.0 - v.dp / std::sqrt(R_ * R_ - v.p * v.p);
}

double CircleCoordinates::phi_of_theta(double theta) const {
  const auto f = [&](double phi) { return phi + safe_acos(eval(body_, phi) / R_) - theta; };
  return roots::find_root(f, theta - 0.5 * pi, theta, options_.abs_tol);
}

double CircleCoordinates::w(double phi) const {
  const double p = eval(body_, phi);
  const double base = safe_acos(p / R_);
  const auto f = [&](double w) { return base + safe_acos(eval(body_, phi + pi - w) / R_) - (pi - w); };
  // Seed with the disc of radius a0.
  const double seed = std::clamp(2.0 * std::asin(std::min(1.0, std::abs(body_.a0()) / R_)), 1e-3, pi - 1e-3);
  const double f_seed = f(seed);
  if (f_seed == 0.0) return seed;
  if (f_seed < 0.0) return roots::find_root(f, seed, pi, f_seed, f(pi), options_.abs_tol);
  return roots::find_root(f, 0.0, seed, f(0.0), f_seed, options_.abs_tol);
}

double CircleCoordinates::relation_residual(double phi, double w) const {
  const double p = eval(body_, phi), p1 = eval(body_, phi + pi - w);
  const double s = std::sin(w);
  return std::abs(p * p + p1 * p1 + 2.0 * p * p1 * std::cos(w) - R_ * R_ * s * s) / (R_ * R_);
}

VisualAngleSample CircleCoordinates::sample(double phi) const {
  VisualAngleSample s;
  s.R = R_;
  s.phi = phi;
  s.theta = theta(phi);
  s.w = w(phi);
  s.relation_residual = relation_residual(phi, s.w);
  return s;
}

bool CircleCoordinates::should_check(double phi) const {
  switch (options_.fd_check) {
    case FiniteDifferenceCheck::Never: return false;
    case FiniteDifferenceCheck::Always: return true;
    case FiniteDifferenceCheck::Sampled: {
      // Deterministic 1% sample keyed on the bits of phi.
      auto bits = std::bit_cast<std::uint64_t>(phi);
      bits ^= bits >> 33;
      bits *= 0xff51afd7ed558ccdULL;
      bits ^= bits >> 33;
      return bits % 100 == 0;
    }
  }
  return false;
}

WPhiResult CircleCoordinates::w_phi(double phi, double w) const {
  const auto v = eval_all(body_, phi);
  const auto v1 = eval_all(body_, phi + pi - w);
  const double p = v.p, dp = v.dp, p1 = v1.p, dp1 = v1.dp;
  const double c = std::cos(w), s = std::sin(w);
  const double num = p * dp + p1 * dp1 + (dp * p1 + p * dp1) * c;
  WPhiResult out;
  out.implicit = num / (R_ * R_ * s * c + p1 * dp1 + p * dp1 * c + p * p1 * s);
  out.printed = num / (R_ * R_ * s * c + p1 * dp1 + p * dp1 + p * p1);

  if (should_check(phi)) {
    const double h = options_.fd_step;
    const double fd = (this->w(phi + h) - this->w(phi - h)) / (2.0 * h);
    out.finite_difference = fd;
    const double floor = 1e-8 / R_;
    out.consistent = std::abs(fd - out.implicit) <= options_.fd_rel_tol * std::abs(fd) + floor;
    if (!out.consistent) {
      std::ostringstream os;
      os << "w_phi mismatch at R = " << R_ << ", phi = " << phi << ": implicit " << out.implicit
         << ", finite difference " << fd;
      if (options_.diagnostic) {
        options_.diagnostic(os.str());
      } else {
        std::clog << "visang: " << os.str() << '\n';
      }
    }
  }
  return out;
}

VisualAngleSample visual_angle_on_circle(const FourierSupport& body, double R, double phi) {
  return CircleCoordinates(body, R).sample(phi);
}

double w_phi_on_circle(const FourierSupport& body, double R, double phi) {
  return CircleCoordinates(body, R).w_phi(phi).implicit;
}

double polar_to_body_param(const FourierSupport& body, double R, double theta) {
  return CircleCoordinates(body, R).phi_of_theta(theta);
}

CircleMeans circle_mean_estimates(const FourierSupport& body, double R, int grid) {
  if (grid < 512) throw GeometryError(ErrorKind::InvalidArgument, "grid must be at least 512");
  AngleOptions opts;
  opts.fd_check = FiniteDifferenceCheck::Never;
  const CircleCoordinates circle(body, R, opts);

  double w_phi_sum = 0.0, w_theta_sum = 0.0, e_phi = 0.0, e_theta = 0.0, printed_dev = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double phi = 2.0 * pi * j / grid;
    const double w = circle.w(phi);
    const WPhiResult d = circle.w_phi(phi, w);
    const double jac = circle.jacobian(phi);
    w_phi_sum += w;
    w_theta_sum += w * jac;
    e_phi += w * w - d.implicit * d.implicit;
    // w_theta = w_phi / jac and dtheta = jac dphi.
    e_theta += w * w * jac - d.implicit * d.implicit / jac;
    printed_dev = std::max(printed_dev, std::abs(d.printed - d.implicit));
  }
  const double h = 2.0 * pi / grid;
  const FourierSupport a = width_function(body);
  const double width_energy =
      quad::periodic_trapezoid([&](double phi) {
        const auto v = eval_all(a, phi);
        return v.p * v.p - v.dp * v.dp;
      }, std::max(grid, 256));

  CircleMeans m;
  m.R = R;
  m.grid = grid;
  m.phi_integral = R * h * w_phi_sum;
  m.theta_integral = R * h * w_theta_sum;
  m.phi_energy = R * R * h * e_phi;
  m.theta_energy = R * R * h * e_theta;
  m.twice_perimeter = 2.0 * perimeter(body);
  m.width_energy = width_energy;
  m.eight_area = 8.0 * area(body);
  m.max_printed_deviation = printed_dev;
  return m;
}

}  // namespace visang
