#include "visang/isotopic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <sstream>

#include "visang/angle.hpp"
#include "visang/minimize.hpp"
#include "visang/quadrature.hpp"

namespace visang {

using std::numbers::pi;

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < pi)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " outside (0, pi)";
    throw GeometryError(ErrorKind::AlphaOutOfRange, os.str());
  }
}

IsotopicCurve trace(const FourierSupport& body, double alpha, int grid) {
  IsotopicCurve c;
  c.alpha = alpha;
  c.grid = grid;
  c.points.resize(2, grid);
  c.tangents.resize(2, grid);
  c.radicand.resize(grid);
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  double root_sum = 0.0, area_sum = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double phi = 2.0 * pi * j / grid;
    const auto v = eval_all(body, phi);
    const auto v1 = eval_all(body, phi + pi - alpha);
    const double p = v.p, dp = v.dp, p1 = v1.p, dp1 = v1.dp;
    const double s = std::sin(phi), co = std::cos(phi);
    const double sm = std::sin(phi - alpha), cm = std::cos(phi - alpha);
    const double X = -(p * sm + p1 * s) / sa;
    const double Y = (p * cm + p1 * co) / sa;
    const double dX = -(dp * sm + p * cm + dp1 * s + p1 * co) / sa;
    const double dY = (dp * cm - p * sm + dp1 * co - p1 * s) / sa;
    c.points.col(j) << X, Y;
    c.tangents.col(j) << dX, dY;
    c.radicand[j] = p * p + p1 * p1 + dp * dp + dp1 * dp1 + 2.0 * (p * p1 + dp * dp1) * ca +
                    2.0 * (p * dp1 - dp * p1) * sa;
    root_sum += std::sqrt(std::max(0.0, c.radicand[j]));
    area_sum += X * dY - Y * dX;
  }
  const double h = 2.0 * pi / grid;
  c.length = h * root_sum / sa;
  c.area = 0.5 * h * area_sum;
  return c;
}

double lagrange_at_zero(const std::array<double, 3>& x, const std::array<double, 3>& y) {
  double out = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j) {
      if (j != i) w *= -x[j] / (x[i] - x[j]);
    }
    out += w * y[i];
  }
  return out;
}

/// Origin-centred fit: R^2 is the mean of (p^2 + p1^2 + 2 p p1 cos a) / sin^2 a.
std::pair<double, double> centred_fit(const FourierSupport& body, double alpha, int grid) {
  const double s2 = std::pow(std::sin(alpha), 2), ca = std::cos(alpha);
  Eigen::ArrayXd dist(grid);
  for (int j = 0; j < grid; ++j) {
    const double phi = 2.0 * pi * j / grid;
    const double p = eval(body, phi), p1 = eval(body, phi + pi - alpha);
    dist[j] = (p * p + p1 * p1 + 2.0 * p * p1 * ca) / s2;
  }
  const double R = std::sqrt(dist.mean());
  const double dev = (dist.max(0.0).sqrt() - R).abs().maxCoeff() / R;
  return {R, dev};
}

bool has_harmonics_beyond_translation(const FourierSupport& body) {
  return sum_amplitude_sq(body, [](int k) { return k >= 2; }) > 0.0;
}

}  // namespace

double IsotopicCurve::polyline_length() const {
  double s = 0.0;
  for (int j = 0; j < grid; ++j) s += (points.col((j + 1) % grid) - points.col(j)).norm();
  return s;
}

double IsotopicCurve::polygon_area() const {
  double s = 0.0;
  for (int j = 0; j < grid; ++j) {
    const int k = (j + 1) % grid;
    s += points(0, j) * points(1, k) - points(0, k) * points(1, j);
  }
  return 0.5 * s;
}

IsotopicCurve curve(const FourierSupport& body, double alpha, int grid) {
  check_alpha(alpha);
  if (grid < 512) throw GeometryError(ErrorKind::InvalidArgument, "curve grid must be at least 512");
  for (int attempt = 0; attempt < 2; ++attempt) {
    IsotopicCurve c = trace(body, alpha, grid);
    const double tol = 1e-12 * std::max(1.0, c.radicand.abs().maxCoeff());
    if (c.radicand.minCoeff() >= -tol) return c;
    grid *= 2;
  }
  std::ostringstream os;
  os << "Delta(phi, alpha) < 0 at alpha = " << alpha << " after resampling";
  throw GeometryError(ErrorKind::NegativeRadicand, os.str());
}

double visual_angle_spot_check(const FourierSupport& body, const IsotopicCurve& c, int count) {
  const TangentSolver solver(body);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const int j = static_cast<int>(static_cast<long>(i) * c.grid / count);
    worst = std::max(worst, std::abs(solver.angle(c.points.col(j)) - c.alpha));
  }
  return worst;
}

IsotopicLimits limits(const FourierSupport& body, int grid) {
  IsotopicLimits out;
  const FourierSupport a = width_function(body);
  const int n = std::max(grid, 16 * std::max(1, body.max_harmonic()));
  out.length_sin = quad::periodic_trapezoid([&](double phi) {
    const auto v = eval_all(a, phi);
    return std::hypot(v.p, v.dp);
  }, n);
  const double L = perimeter(body);
  const double even = sum_amplitude_sq(body, [](int k) { return k >= 2 && k % 2 == 0; });
  out.area_sin2 = L * L / pi + 2.0 * pi * even;
  out.width_square_integral = 2.0 * pi * quad::periodic_trapezoid([&](double phi) { return std::pow(eval(a, phi), 2); }, n);
  out.ratio = out.length_sin * out.length_sin / out.width_square_integral;

  for (int i = 0; i < 3; ++i) {
    const double alpha = out.alphas[i];
    const IsotopicCurve c = curve(body, alpha, grid);
    out.sampled_length_sin[i] = c.length * std::sin(alpha);
    out.sampled_area_sin2[i] = c.area * std::pow(std::sin(alpha), 2);
    out.sampled_ratio[i] = c.length * c.length / (4.0 * pi * c.area);
  }
  out.extrapolated_length_sin = lagrange_at_zero(out.alphas, out.sampled_length_sin);
  out.extrapolated_area_sin2 = lagrange_at_zero(out.alphas, out.sampled_area_sin2);
  out.extrapolated_ratio = lagrange_at_zero(out.alphas, out.sampled_ratio);
  return out;
}

CircleFit detect_circle(const FourierSupport& body, double alpha, bool search, int grid) {
  check_alpha(alpha);
  CircleFit fit;
  fit.alpha = alpha;
  if (!search) {
    std::tie(fit.radius, fit.deviation) = centred_fit(body, alpha, grid);
    return fit;
  }
  const double half_box = 0.5 * std::abs(body.a0());
  const auto objective = [&](const Eigen::Vector2d& uv) {
    return centred_fit(translate(body, uv.x(), uv.y()), alpha, grid).second;
  };
  const auto best = opt::nelder_mead(objective, Eigen::Vector2d::Zero(), 0.05 * std::abs(body.a0()),
                                     Eigen::Vector2d::Constant(-half_box), Eigen::Vector2d::Constant(half_box));
  std::tie(fit.radius, fit.deviation) = centred_fit(translate(body, best.x.x(), best.x.y()), alpha, grid);
  fit.center = -best.x;
  return fit;
}

QuarterConstruction construct_quarter(double c0, double c2, double c6, int max_harmonic) {
  Projection proj = generate::quarter_symmetric(c0, c2, c6, max_harmonic);
  QuarterConstruction out{std::move(proj.body), proj.max_deviation, std::sqrt(2.0 * c0), {}};
  out.fit = detect_circle(out.body, 0.5 * pi);
  if (out.fit.deviation > kCircleThreshold ||
      std::abs(out.fit.radius - out.expected_radius) > kCircleThreshold * out.expected_radius) {
    std::ostringstream os;
    os << "projected body misses the circle of radius " << out.expected_radius << " (fit R = " << out.fit.radius
       << ", deviation " << out.fit.deviation << "); raise max_harmonic";
    throw GeometryError(ErrorKind::NoIsotopicCircle, os.str());
  }
  return out;
}

double hurwitz_g(int k, double alpha) {
  if (k < 2) throw GeometryError(ErrorKind::InvalidArgument, "Hurwitz functions need k >= 2");
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return 1.0 + 0.5 * sign * ((k + 1) * std::cos((k - 1) * alpha) - (k - 1) * std::cos((k + 1) * alpha));
}

double admissible_alpha(int m, int n) {
  if (n < 2 || m <= 0 || m >= n || std::gcd(m, n) != 1 || m % 2 == 0) {
    std::ostringstream os;
    os << "alpha = pi - (" << m << "/" << n << ") pi needs 0 < m < n, gcd(m, n) = 1 and m odd";
    throw GeometryError(ErrorKind::RationalityViolation, os.str());
  }
  return pi - pi * m / n;
}

void check_periodicity(const FourierSupport& body, int n) {
  const double tol = 1e-12 * std::abs(body.a0());
  for (int k = 1; k <= body.max_harmonic(); ++k) {
    if (k % n != 0 && std::sqrt(body.amplitude_sq(k)) > tol) {
      std::ostringstream os;
      os << "harmonic k = " << k << " is not a multiple of n = " << n;
      throw GeometryError(ErrorKind::PeriodicityViolation, os.str());
    }
  }
}

AreaSeries area_series(const FourierSupport& body, int m, int n, int grid) {
  const double alpha = admissible_alpha(m, n);
  check_periodicity(body, n);
  AreaSeries out{};
  out.alpha = alpha;
  out.area = area(body);
  const double c2 = std::pow(std::cos(0.5 * alpha), 2);
  double plus = 0.0, minus = 0.0;
  for (int k = 2; k <= body.max_harmonic(); ++k) {
    const double ck = body.amplitude_sq(k);
    if (ck == 0.0) continue;
    const double g = hurwitz_g(k, alpha);
    plus += (2.0 * (k * k + 1) * c2 + g) * ck;
    minus += (2.0 * (k * k - 1) * c2 + g) * ck;
  }
  out.prediction_plus = out.area + pi / (4.0 * c2) * plus;
  out.prediction_minus = out.area + pi / (4.0 * c2) * minus;
  out.oracle = curve(body, alpha, grid).area * std::pow(std::sin(0.5 * alpha), 2);
  const double e_plus = std::abs(out.prediction_plus - out.oracle) / std::abs(out.oracle);
  const double e_minus = std::abs(out.prediction_minus - out.oracle) / std::abs(out.oracle);
  out.selected_sign = e_minus <= e_plus ? -1 : +1;
  out.selected_relative_error = std::min(e_plus, e_minus);
  out.rejected_relative_error = std::max(e_plus, e_minus);
  return out;
}

ProductIntegral pp1_integral(const FourierSupport& body, double alpha) {
  const double L = perimeter(body);
  double s = 0.0;
  for (int k = 1; k <= body.max_harmonic(); ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^(k+1)
    s += sign * body.amplitude_sq(k) * std::cos(k * alpha);
  }
  ProductIntegral out;
  out.closed_form = L * L / (2.0 * pi) - pi * s;
  const int n = std::max(256, 4 * body.max_harmonic() + 4);
  out.quadrature =
      quad::periodic_trapezoid([&](double phi) { return eval(body, phi) * eval(body, phi + pi - alpha); }, n);
  return out;
}

CircleIdentity perimeter_identity(const FourierSupport& body, int m, int n, const CircleFit& fit) {
  const double alpha = admissible_alpha(m, n);
  if (std::abs(fit.alpha - alpha) > 1e-12) {
    throw GeometryError(ErrorKind::InvalidArgument, "circle fit was made at a different alpha");
  }
  if (!(fit.deviation <= kCircleThreshold)) {
    std::ostringstream os;
    os << "no isotopic circle at alpha = " << alpha << " (deviation " << fit.deviation << ")";
    throw GeometryError(ErrorKind::NoIsotopicCircle, os.str());
  }
  const FourierSupport centred = translate(body, -fit.center.x(), -fit.center.y());
  check_periodicity(centred, n);

  CircleIdentity out{};
  out.alpha = alpha;
  out.radius = fit.radius;
  out.perimeter = perimeter(centred);
  out.area = area(centred);
  double even = 0.0, odd = 0.0;
  for (int k = n, mu = 1; k <= centred.max_harmonic(); k += n, ++mu) {
    (mu % 2 == 0 ? even : odd) += centred.amplitude_sq(k);
  }
  const double half = 0.5 * alpha;
  out.lhs = out.perimeter * out.perimeter + 2.0 * pi * pi * even + 2.0 * pi * pi * std::pow(std::tan(half), 2) * odd;
  const double LR = 2.0 * pi * fit.radius;
  out.rhs = LR * LR * std::pow(std::sin(half), 2);
  out.residual = std::abs(out.lhs - out.rhs) / out.rhs;
  out.perimeter_bound = LR * std::sin(half);
  out.area_bound = pi * fit.radius * fit.radius * std::pow(std::sin(half), 2);
  out.perimeter_holds = out.perimeter <= out.perimeter_bound * (1.0 + kCircleThreshold);
  out.area_holds = out.area <= out.area_bound * (1.0 + 2.0 * kCircleThreshold);
  return out;
}

CircleIdentity perimeter_identity(const FourierSupport& body, int m, int n) {
  return perimeter_identity(body, m, n, detect_circle(body, admissible_alpha(m, n)));
}

std::vector<double> alpha_grid(int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = pi * (i + 0.5) / n;
  return out;
}

DiscTestReport constant_width_disc_test(const FourierSupport& body, std::span<const double> alphas, bool search,
                                        int grid) {
  const auto cw = is_constant_width(body);
  if (!cw.constant_width) {
    std::ostringstream os;
    os << "even harmonic amplitude " << cw.max_even_amplitude << " is not zero";
    throw GeometryError(ErrorKind::NotConstantWidth, os.str());
  }
  DiscTestReport r{};
  r.alphas.assign(alphas.begin(), alphas.end());
  r.min_deviation = std::numeric_limits<double>::infinity();
  const FourierSupport disc(body.a0());
  double floor = 0.0;
  for (const double alpha : alphas) {
    const double dev = detect_circle(body, alpha, search, grid).deviation;
    r.deviations.push_back(dev);
    if (dev < r.min_deviation) {
      r.min_deviation = dev;
      r.alpha_at_min = alpha;
    }
    floor = std::max(floor, detect_circle(disc, alpha, search, grid).deviation);
  }
  r.noise_floor = std::max(floor, std::numeric_limits<double>::epsilon());
  r.threshold = 10.0 * r.noise_floor;
  r.counterexample = has_harmonics_beyond_translation(body) && r.min_deviation <= r.threshold;
  return r;
}

}  // namespace visang
