#include <doctest.h>

#include <cmath>
#include <numbers>

#include "visang/errors.hpp"
#include "visang/expression.hpp"

using visang::Expression;
using visang::GeometryError;
using std::numbers::pi;

TEST_CASE("evaluation") {
  CHECK(Expression::parse("w - sin(w)")(1.0) == doctest::Approx(1.0 - std::sin(1.0)));
  CHECK(Expression::parse("2*w^3")(0.5) == doctest::Approx(0.25));
  CHECK(Expression::parse("-w^2")(3.0) == doctest::Approx(-9.0));
  CHECK(Expression::parse("2^3^2")(0.0) == doctest::Approx(512.0));
  CHECK(Expression::parse("pi/2 + 1e-1")(0.0) == doctest::Approx(pi / 2 + 0.1));
  CHECK(Expression::parse("sqrt(abs(w)) * exp(log(2))")(-4.0) == doctest::Approx(4.0));
  CHECK(Expression::parse("tan(w) / cos(w)")(0.3) == doctest::Approx(std::tan(0.3) / std::cos(0.3)));
  CHECK(Expression::parse(" ( w + 1 ) * ( w - 1 ) ")(3.0) == doctest::Approx(8.0));
}

TEST_CASE("symbolic derivative matches finite differences") {
  const char* cases[] = {"w - sin(w)", "sin(w)^3/cos(w/2)^2", "w^2*(w - sin(w))", "exp(-w)*w^3",
                         "sqrt(1 + w^2)", "log(2 + cos(w))", "abs(w - 1)^3", "tan(w/3)", "w^3/(1+w)"};
  for (const char* text : cases) {
    const Expression e = Expression::parse(text);
    const Expression d = e.derivative();
    for (double w : {0.3, 1.1, 2.5}) {
      const double h = 1e-5;
      const double fd = (e(w + h) - e(w - h)) / (2 * h);
      CHECK_MESSAGE(d(w) == doctest::Approx(fd).epsilon(1e-7), text << " at " << w);
    }
  }
}

TEST_CASE("round trip through to_string") {
  const Expression e = Expression::parse("w^2*(w - sin(w)) + 3");
  CHECK(Expression::parse(e.to_string())(1.7) == doctest::Approx(e(1.7)));
}

TEST_CASE("parse errors") {
  for (const char* bad : {"", "w +", "sin w", "foo(w)", "(w", "w)", "x", "1..2", "w $ 2"}) {
    CHECK_THROWS_AS(Expression::parse(bad), GeometryError);
  }
}
