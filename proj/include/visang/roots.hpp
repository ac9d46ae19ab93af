#pragma once

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>

#include "visang/errors.hpp"

namespace visang::roots {

/// Root of f in [lo, hi] given the endpoint values, refined until the bracket
/// is narrower than abs_tol. Throws NoBracket when the signs agree.
template <typename F>
double find_root(F&& f, double lo, double hi, double f_lo, double f_hi, double abs_tol = 1e-12) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream os;
    os << "no sign change on [" << lo << ", " << hi << "]: f = " << f_lo << ", " << f_hi;
    throw GeometryError(ErrorKind::NoBracket, os.str());
  }
  std::uintmax_t max_iter = 200;
  const auto tol = [abs_tol](double a, double b) { return std::abs(b - a) <= abs_tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
  return 0.5 * (a + b);
}

template <typename F>
double find_root(F&& f, double lo, double hi, double abs_tol = 1e-12) {
  return find_root(f, lo, hi, f(lo), f(hi), abs_tol);
}

}  // namespace visang::roots
