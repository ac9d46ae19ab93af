#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "test_util.hpp"
#include "visang/isotopic.hpp"

using namespace visang;
using std::numbers::pi;
using visang::testing::random_body;
using visang::testing::trapezoid;

namespace {

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.kind();
  }
  FAIL("no GeometryError thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("isotopic curves of a disc are concentric circles") {
  const FourierSupport disc = generate::disc(1.0);
  for (double alpha : {pi / 2, pi / 3, 2.5}) {
    const double r = 1.0 / std::sin(alpha / 2);
    const IsotopicCurve c = curve(disc, alpha, 1024);
    CHECK(c.length == doctest::Approx(2 * pi * r).epsilon(1e-13));
    CHECK(c.area == doctest::Approx(pi * r * r).epsilon(1e-13));
    for (int j = 0; j < c.grid; j += 97) CHECK(c.points.col(j).norm() == doctest::Approx(r).epsilon(1e-13));
  }
  CHECK(curve(disc, pi / 2).length == doctest::Approx(2 * pi * std::sqrt(2.0)));
  CHECK(curve(disc, pi / 3).area == doctest::Approx(4 * pi));
}

TEST_CASE("curve argument errors") {
  const FourierSupport disc = generate::disc(1.0);
  CHECK(kind_of([&] { curve(disc, 0.0); }) == ErrorKind::AlphaOutOfRange);
  CHECK(kind_of([&] { curve(disc, pi); }) == ErrorKind::AlphaOutOfRange);
  CHECK(kind_of([&] { curve(disc, 1.0, 256); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { detect_circle(disc, -0.1); }) == ErrorKind::AlphaOutOfRange);
}

TEST_CASE("curve invariants on random bodies") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.2, 2.9);
  for (int trial = 0; trial < 8; ++trial) {
    const FourierSupport body = random_body(rng, 1 + trial % 6);
    const double alpha = u(rng);
    const IsotopicCurve c = curve(body, alpha);
    CHECK(c.radicand.minCoeff() >= 0.0);
    for (int j = 0; j < c.grid; j += 101) {
      CHECK(c.radicand[j] == doctest::Approx(std::pow(std::sin(alpha), 2) * c.tangents.col(j).squaredNorm()).epsilon(1e-12));
    }
    CHECK(c.length * c.length >= 4 * pi * c.area * (1 - 1e-12));
    CHECK(visual_angle_spot_check(body, c) <= 1e-8);
    CHECK(rel(c.polygon_area(), c.area) <= 1e-4);
  }
}

TEST_CASE("polyline length converges at second order") {
  const FourierSupport body = FourierSupport(1.0).with_harmonic(2, 0.08, 0.02).with_harmonic(3, 0.03, 0.0);
  const double L = curve(body, 1.2, 4096).length;
  const double e1 = std::abs(curve(body, 1.2, 512).polyline_length() - L);
  const double e2 = std::abs(curve(body, 1.2, 1024).polyline_length() - L);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("limits as alpha tends to zero") {
  const IsotopicLimits cw = limits(generate::perturbed(3, 0.05));
  CHECK(std::abs(cw.ratio - 1.0) <= 1e-10);
  for (int i = 1; i < 3; ++i) CHECK(std::abs(cw.sampled_ratio[i] - 1) < std::abs(cw.sampled_ratio[i - 1] - 1));

  const FourierSupport sym = generate::perturbed(2, 0.1);
  const IsotopicLimits s = limits(sym);
  const FourierSupport a = width_function(sym);
  CHECK(trapezoid([&](double phi) { return std::pow(eval(a, phi), 2); }, 256) == doctest::Approx(8.04 * pi).epsilon(1e-13));
  const double root = trapezoid([&](double phi) { return std::hypot(eval(a, phi), eval(a, phi, 1)); }, 4096);
  CHECK(s.length_sin == doctest::Approx(root).epsilon(1e-12));
  CHECK(s.ratio == doctest::Approx(root * root / (2 * pi * 8.04 * pi)).epsilon(1e-12));
  CHECK(s.ratio > 1.0);
  CHECK(rel(s.extrapolated_ratio, s.ratio) <= 1e-2);
  CHECK(rel(s.extrapolated_length_sin, s.length_sin) <= 1e-2);
  CHECK(rel(s.extrapolated_area_sin2, s.area_sin2) <= 1e-2);

  const IsotopicLimits d = limits(generate::disc(1.0));
  CHECK(d.length_sin == doctest::Approx(4 * pi));
  CHECK(d.area_sin2 == doctest::Approx(4 * pi));
}

TEST_CASE("width square identity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const FourierSupport body = random_body(rng, 1 + trial);
    const FourierSupport a = width_function(body);
    const double lhs = 2 * pi * trapezoid([&](double phi) { return std::pow(eval(a, phi), 2); }, 512);
    double even = 0.0;
    for (int k = 2; k <= body.max_harmonic(); k += 2) even += body.amplitude_sq(k);
    const double L = perimeter(body);
    CHECK(rel(lhs, 4 * L * L + 8 * pi * pi * even) <= 1e-10);
  }
}

TEST_CASE("circle detection") {
  const FourierSupport disc = generate::disc(1.0);
  for (double alpha : {0.3, pi / 2, 2.8}) {
    const CircleFit f = detect_circle(disc, alpha);
    CHECK(f.deviation <= 1e-14);
    CHECK(f.radius == doctest::Approx(1.0 / std::sin(alpha / 2)).epsilon(1e-14));
  }
  const FourierSupport moved = translate(generate::disc(2.0), 0.3, -0.1);
  CHECK(detect_circle(moved, 1.0).deviation > 1e-3);
  const CircleFit f = detect_circle(moved, 1.0, true);
  CHECK(f.deviation <= 1e-9);
  CHECK(f.center.x() == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(f.center.y() == doctest::Approx(-0.1).epsilon(1e-8));

  const QuarterConstruction q = construct_quarter(21.5, 2.5, 1.0);
  CHECK(q.fit.deviation <= 1e-6);
  CHECK(q.fit.radius == doctest::Approx(std::sqrt(43.0)).epsilon(1e-6));
  CHECK(q.fit.radius == doctest::Approx(6.5574).epsilon(1e-5));
}

TEST_CASE("construct_quarter") {
  const QuarterConstruction d = construct_quarter(4.0, 0.0, 0.0);
  CHECK(d.body.max_harmonic() == 0);
  CHECK(d.body.a0() == doctest::Approx(2.0));
  // sqrt(1 + 0.9 cos 2phi) is an ellipse with semi-axes sqrt(1.9), sqrt(0.1): convex, with
  // orthoptic circle of radius sqrt(2). K = 16 cannot resolve it; K = 48 can.
  CHECK(kind_of([] { construct_quarter(1.0, 0.9, 0.0); }) == ErrorKind::NoIsotopicCircle);
  const QuarterConstruction e = construct_quarter(1.0, 0.9, 0.0, 48);
  CHECK(e.fit.radius == doctest::Approx(std::sqrt(1.9 + 0.1)).epsilon(1e-8));
  CHECK(e.fit.deviation <= 1e-6);
  CHECK(kind_of([] { construct_quarter(1.0, 0.0, 0.9); }) == ErrorKind::ConvexityViolation);
  CHECK(kind_of([] { construct_quarter(1.0, 0.8, 0.5); }) == ErrorKind::PositivityViolation);
}

TEST_CASE("Hurwitz functions") {
  CHECK(hurwitz_g(2, pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
  for (int k = 2; k <= 9; ++k) CHECK(hurwitz_g(k, 0.0) == doctest::Approx(1.0 + (k % 2 ? -1.0 : 1.0)));
  CHECK(std::abs(hurwitz_g(3, pi)) <= 1e-15);
  CHECK_THROWS_AS(hurwitz_g(1, 0.5), GeometryError);

  for (int n = 2; n <= 6; ++n) {
    for (int m = 1; m < n; m += 2) {
      if (std::gcd(m, n) != 1) continue;
      const double alpha = pi - pi * m / n;
      for (int mu = 1; mu <= 8; ++mu) {
        const double expected = 1.0 + (mu % 2 ? -1.0 : 1.0) * std::cos(alpha);
        CHECK(std::abs(hurwitz_g(mu * n, alpha) - expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("rationality and periodicity") {
  CHECK(admissible_alpha(1, 2) == doctest::Approx(pi / 2));
  CHECK(admissible_alpha(3, 5) == doctest::Approx(2 * pi / 5));
  for (auto [m, n] : {std::pair{2, 3}, {3, 6}, {5, 3}, {0, 3}, {1, 1}}) {
    CHECK(kind_of([=] { admissible_alpha(m, n); }) == ErrorKind::RationalityViolation);
  }
  CHECK_NOTHROW(check_periodicity(generate::quarter_symmetric().body, 2));
  CHECK(kind_of([] { check_periodicity(generate::perturbed(3, 0.1), 2); }) == ErrorKind::PeriodicityViolation);
  CHECK(kind_of([] { area_series(generate::perturbed(3, 0.1), 1, 2); }) == ErrorKind::PeriodicityViolation);
}

TEST_CASE("area series") {
  for (auto [m, n] : {std::pair{1, 2}, {1, 3}, {3, 4}}) {
    const AreaSeries d = area_series(generate::disc(1.0), m, n);
    CHECK(d.prediction_plus == doctest::Approx(pi));
    CHECK(d.prediction_minus == doctest::Approx(pi));
    CHECK(d.oracle == doctest::Approx(pi).epsilon(1e-13));
  }
  const AreaSeries q = area_series(generate::quarter_symmetric().body, 1, 2);
  CHECK(q.selected_sign == -1);
  CHECK(q.selected_relative_error <= 1e-4);
  CHECK(q.rejected_relative_error > 1e-3);

  const FourierSupport tri = FourierSupport(1.0).with_harmonic(3, 0.04, 0.01).with_harmonic(6, 0.005, 0.0);
  const AreaSeries t = area_series(tri, 1, 3);
  CHECK(t.selected_sign == -1);
  CHECK(t.selected_relative_error <= 1e-10);
}

TEST_CASE("product integral") {
  const ProductIntegral d = pp1_integral(generate::disc(2.0), 0.7);
  CHECK(d.closed_form == doctest::Approx(8 * pi));
  CHECK(d.quadrature == doctest::Approx(8 * pi));

  const ProductIntegral z = pp1_integral(FourierSupport(1.0).with_harmonic(1, 0.1, 0.0), 0.0);
  const double ref = trapezoid([](double phi) { return (1 + 0.1 * std::cos(phi)) * (1 - 0.1 * std::cos(phi)); }, 64);
  CHECK(z.closed_form == doctest::Approx(ref).epsilon(1e-14));
  CHECK(z.closed_form == doctest::Approx(2 * pi - 0.01 * pi).epsilon(1e-14));

  const ProductIntegral h = pp1_integral(generate::perturbed(2, 0.1), pi / 2);
  CHECK(rel(h.quadrature, h.closed_form) <= 1e-10);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, pi);
  for (int trial = 0; trial < 10; ++trial) {
    const FourierSupport body = random_body(rng, 1 + trial);
    const ProductIntegral r = pp1_integral(body, u(rng));
    CHECK(rel(r.quadrature, r.closed_form) <= 1e-10);
  }
}

TEST_CASE("perimeter identity and inequalities") {
  for (auto [m, n] : {std::pair{1, 2}, {1, 3}, {3, 4}}) {
    const CircleIdentity d = perimeter_identity(generate::disc(1.0), m, n);
    CHECK(d.residual <= 1e-12);
    CHECK(d.perimeter_holds);
    CHECK(d.area_holds);
  }
  const FourierSupport q = generate::quarter_symmetric().body;
  const CircleIdentity c = perimeter_identity(q, 1, 2);
  CHECK(c.residual <= 1e-4);
  CHECK(c.perimeter <= 2 * pi * std::sqrt(43.0) * std::sin(pi / 4) * (1 + 1e-6));
  CHECK(c.perimeter_bound == doctest::Approx(29.13).epsilon(1e-3));
  CHECK(c.area <= 21.5 * pi * (1 + 2e-6));
  CHECK(c.perimeter_holds);
  CHECK(c.area_holds);

  CHECK(kind_of([] { perimeter_identity(generate::perturbed(2, 0.1), 1, 2); }) == ErrorKind::NoIsotopicCircle);
  const CircleFit wrong = detect_circle(q, 1.0);
  CHECK(kind_of([&] { perimeter_identity(q, 1, 2, wrong); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("constant width bodies have no isotopic circle") {
  const auto alphas = alpha_grid(64);
  REQUIRE(alphas.size() == 64);
  CHECK(alphas.front() == doctest::Approx(pi / 128));

  const DiscTestReport d = constant_width_disc_test(generate::disc(1.0), alphas);
  for (double dev : d.deviations) CHECK(dev <= 1e-13);
  CHECK_FALSE(d.counterexample);

  const std::vector<generate::OddHarmonic> two{{3, 0.03, 0.0}, {5, 0.01, 0.0}};
  for (const FourierSupport& body : {generate::perturbed(3, 0.05), generate::constant_width(1.0, two)}) {
    const DiscTestReport r = constant_width_disc_test(body, alphas);
    CHECK(r.min_deviation > r.threshold);
    CHECK(r.threshold == doctest::Approx(10 * r.noise_floor));
    CHECK_FALSE(r.counterexample);
  }
  CHECK(kind_of([&] { constant_width_disc_test(generate::perturbed(2, 0.1), alphas); }) ==
        ErrorKind::NotConstantWidth);
}
