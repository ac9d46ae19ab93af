#include "visang/crofton.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "visang/angle.hpp"
#include "visang/expression.hpp"
#include "visang/quadrature.hpp"

namespace visang {

using std::numbers::pi;

namespace {

constexpr std::size_t kGaussNodes = 64;

const quad::GaussLegendre<kGaussNodes>& gauss() { return quad::GaussLegendre<kGaussNodes>::instance(); }

}  // namespace

double AngleWeightFunction::df(double w) const {
  if (derivative) return derivative(w);
  // Fourth-order central difference.
  const double h = 1e-3 * std::max(1.0, std::abs(w));
  return (8.0 * (f(w + h) - f(w - h)) - (f(w + 2.0 * h) - f(w - 2.0 * h))) / (12.0 * h);
}

AngleWeightFunction make_weight(std::string name, std::function<double(double)> f,
                                std::function<double(double)> derivative) {
  AngleWeightFunction out{std::move(name), std::move(f), std::move(derivative), 0.0};
  const double h = 2e-3;
  const double coarse = out.f(h) / (h * h * h);
  const double fine = out.f(0.5 * h) / (0.125 * h * h * h);
  out.cubic_coeff = 2.0 * fine - coarse;
  return out;
}

namespace weights {

AngleWeightFunction crofton(double lambda) {
  std::ostringstream name;
  name << "crofton";
  if (lambda != 1.0) name << '*' << lambda;
  return {name.str(), [lambda](double w) { return lambda * (w - std::sin(w)); },
          [lambda](double w) { return lambda * (1.0 - std::cos(w)); }, lambda / 6.0};
}

AngleWeightFunction sin3() {
  return {"sin3", [](double w) { return 4.0 / 3.0 * std::pow(std::sin(w), 3); },
          [](double w) { return 4.0 * std::pow(std::sin(w), 2) * std::cos(w); }, 4.0 / 3.0};
}

AngleWeightFunction sin3_over_cos2() {
  // sin^3 w / cos^2(w/2) = 8 sin^3(w/2) cos(w/2), which stays finite at w = pi.
  return {"sin3_over_cos2",
          [](double w) {
            const double s = std::sin(0.5 * w), c = std::cos(0.5 * w);
            return 8.0 * s * s * s * c;
          },
          [](double w) {
            const double s = std::sin(0.5 * w), c = std::cos(0.5 * w);
            return 4.0 * s * s * (3.0 * c * c - s * s);
          },
          1.0};
}

AngleWeightFunction cubic() {
  return {"cubic", [](double w) { return w * w * w; }, [](double w) { return 3.0 * w * w; }, 1.0};
}

AngleWeightFunction quintic_crofton() {
  return {"quintic_crofton", [](double w) { return w * w * (w - std::sin(w)); },
          [](double w) { return 2.0 * w * (w - std::sin(w)) + w * w * (1.0 - std::cos(w)); }, 0.0};
}

AngleWeightFunction expression(const std::string& text) {
  const Expression e = Expression::parse(text);
  const Expression de = e.derivative();
  return make_weight(text, [e](double w) { return e(w); }, [de](double w) { return de(w); });
}

AngleWeightFunction combine(double alpha, const AngleWeightFunction& f, double beta, const AngleWeightFunction& g) {
  std::ostringstream name;
  name << alpha << '*' << f.name << '+' << beta << '*' << g.name;
  return {name.str(), [=](double w) { return alpha * f(w) + beta * g(w); },
          [=](double w) { return alpha * f.df(w) + beta * g.df(w); },
          alpha * f.cubic_coeff + beta * g.cubic_coeff};
}

}  // namespace weights

CubicCheck check_cubic_decay(const AngleWeightFunction& f) {
  CubicCheck c{};
  c.value_at_zero = f(0.0);
  c.ratio_coarse = f(1e-2) / 1e-6;
  c.ratio_fine = f(1e-3) / 1e-9;
  c.ok = std::isfinite(c.ratio_coarse) && std::isfinite(c.ratio_fine) && std::abs(c.value_at_zero) <= 1e-12 &&
         std::abs(c.ratio_fine) <= 1.5 * std::abs(c.ratio_coarse) + 1e-9;
  return c;
}

Moments moments(const AngleWeightFunction& f, int j_max) {
  const CubicCheck check = check_cubic_decay(f);
  if (!check.ok) {
    std::ostringstream os;
    os << "f is not O(w^3) at 0: f(1e-2)/1e-6 = " << check.ratio_coarse << ", f(1e-3)/1e-9 = " << check.ratio_fine;
    throw GeometryError(ErrorKind::SingularAtZero, os.str());
  }
  Moments m;
  m.f_pi = f(pi);
  // The integrand tends to 6 c3 at 0; integrate from eps and add that limit
  // over [0, eps]. 1 - cos w is evaluated as 2 sin^2(w/2).
  const double eps = 1e-6;
  m.M = gauss().integrate(
            [&](double w) {
              const double s = std::sin(0.5 * w);
              return f.df(w) / (2.0 * s * s);
            },
            eps, pi, 16) +
        6.0 * f.cubic_coeff * eps;
  m.alpha.resize(std::max(0, j_max));
  for (int j = 1; j <= j_max; ++j) {
    m.alpha[j - 1] =
        gauss().integrate([&](double w) { return f.df(w) * j * std::cos(j * w); }, 0.0, pi, 8 + j / 4);
  }
  return m;
}

double cgr_rhs(const FourierSupport& body, const Moments& m) {
  const int n = body.max_harmonic();
  if (static_cast<int>(m.alpha.size()) + 1 < n) {
    throw GeometryError(ErrorKind::InvalidArgument, "moments needed up to j = K_max - 1");
  }
  const double L = perimeter(body), F = area(body);
  double value = -m.f_pi * F + L * L / (2.0 * pi) * m.M;
  double odd_sum = 0.0, even_sum = 0.0;  // running sums of alpha_j for j < k
  for (int k = 1; k <= n; ++k) {
    if (k >= 2) {
      if ((k - 1) % 2 == 1) odd_sum += m.alpha_j(k - 1);
      else even_sum += m.alpha_j(k - 1);
    }
    const double c2 = body.amplitude_sq(k);
    if (k < 2 || c2 == 0.0) continue;
    if (k % 2 == 0) value += pi * c2 * (m.M + 2.0 * odd_sum);
    else value += pi * c2 * (-2.0 * even_sum);
  }
  return value;
}

double cgr_rhs(const FourierSupport& body, const AngleWeightFunction& f) {
  return cgr_rhs(body, moments(f, std::max(1, body.max_harmonic())));
}

std::vector<ExteriorIntegralResult> exterior_integrals(const FourierSupport& body,
                                                       std::span<const AngleWeightFunction> weights,
                                                       const ExteriorConfig& cfg) {
  check_convexity(body);
  for (const auto& f : weights) {
    const CubicCheck c = check_cubic_decay(f);
    if (!c.ok) throw GeometryError(ErrorKind::SingularAtZero, "weight " + f.name + " is not O(w^3) at 0");
  }
  if (cfg.theta_nodes < 8) throw GeometryError(ErrorKind::InvalidArgument, "theta_nodes must be >= 8");

  const TangentSolver solver(body);
  const double max_p = max_support(body);
  const double r_max = cfg.r_max > 0.0 ? cfg.r_max : cfg.r_max_factor * 2.0 * max_p;
  if (!(r_max > max_p)) throw GeometryError(ErrorKind::InvalidArgument, "R_max must exceed max p");

  // Slabs: [rho(theta), 2 max p], then doubling up to R_max.
  std::vector<double> breaks{std::min(2.0 * max_p, r_max)};
  while (breaks.back() < r_max) breaks.push_back(std::min(2.0 * breaks.back(), r_max));
  const auto& gl = gauss();
  const std::size_t nw = weights.size();

  std::vector<double> totals(nw, 0.0);
  std::vector<double> slab(nw);
  const auto accumulate = [&](const Eigen::Vector2d& dir, double R, double weight) {
    const double w = solver.angle(R * dir);
    for (std::size_t k = 0; k < nw; ++k) slab[k] += weight * weights[k](w) * R;
  };

  for (int i = 0; i < cfg.theta_nodes; ++i) {
    const double theta = 2.0 * pi * i / cfg.theta_nodes;
    const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
    const double rho = radial_function(body, theta);
    std::fill(slab.begin(), slab.end(), 0.0);

    // R = rho + (b0 - rho) u^2 absorbs the square-root behaviour of w at the boundary.
    const double span0 = breaks.front() - rho;
    for (std::size_t q = 0; q < kGaussNodes; ++q) {
      const double u = 0.5 * (gl.nodes[q] + 1.0);
      accumulate(dir, rho + span0 * u * u, 0.5 * gl.weights[q] * 2.0 * span0 * u);
    }
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
      const double mid = 0.5 * (breaks[s] + breaks[s + 1]), half = 0.5 * (breaks[s + 1] - breaks[s]);
      for (std::size_t q = 0; q < kGaussNodes; ++q) accumulate(dir, mid + half * gl.nodes[q], half * gl.weights[q]);
    }
    for (std::size_t k = 0; k < nw; ++k) totals[k] += slab[k];
  }

  const FourierSupport a = width_function(body);
  const double cube_integral = quad::periodic_trapezoid([&](double t) { return std::pow(eval(a, t), 3); },
                                                        cfg.theta_nodes);

  std::vector<ExteriorIntegralResult> out(nw);
  for (std::size_t k = 0; k < nw; ++k) {
    auto& r = out[k];
    r.weight = weights[k].name;
    r.r_max = r_max;
    r.tail = weights[k].cubic_coeff * cube_integral / r_max;
    r.value = 2.0 * pi / cfg.theta_nodes * totals[k] + r.tail;
    r.theta_nodes = cfg.theta_nodes;
    r.gauss_nodes = static_cast<int>(kGaussNodes);
    r.radial_slabs = static_cast<int>(breaks.size());
    if (std::abs(r.tail) > cfg.tail_fraction * std::abs(r.value)) {
      std::ostringstream os;
      os << "tail " << r.tail << " exceeds " << cfg.tail_fraction << " of value " << r.value << " for "
         << r.weight;
      throw GeometryError(ErrorKind::TailTooLarge, os.str());
    }
  }
  return out;
}

ExteriorIntegralResult exterior_integral(const FourierSupport& body, const AngleWeightFunction& f,
                                         const ExteriorConfig& cfg) {
  return exterior_integrals(body, std::span(&f, 1), cfg).front();
}

CroftonCheck crofton_check(const FourierSupport& body, const ExteriorConfig& cfg) {
  CroftonCheck c;
  c.integral = exterior_integral(body, weights::crofton(), cfg);
  const double L = perimeter(body), F = area(body);
  c.lhs = c.integral.value;
  c.rhs = 0.5 * L * L - pi * F;
  c.relative_error = std::abs(c.lhs - c.rhs) / std::abs(c.rhs);
  return c;
}

std::pair<double, double> fit_two_parameter(std::span<const double> x, std::span<const double> y,
                                            std::span<const double> target) {
  if (x.size() != y.size() || x.size() != target.size() || x.size() < 2) {
    throw GeometryError(ErrorKind::InvalidArgument, "fit needs at least two samples of equal length");
  }
  const Eigen::Map<const Eigen::VectorXd> X(x.data(), x.size()), Y(y.data(), y.size()),
      I(target.data(), target.size());
  // Normal equations in the basis {x, y - beta x}, which is orthogonal, so
  // the 2x2 system is diagonal.
  const double beta = Y.dot(X) / X.dot(X);
  const Eigen::VectorXd Yp = Y - beta * X;
  if (!(Yp.squaredNorm() > 1e-24 * Y.squaredNorm())) {
    throw GeometryError(ErrorKind::InvalidArgument, "fit columns are collinear");
  }
  const double c1 = I.dot(X) / X.dot(X);
  const double b = I.dot(Yp) / Yp.squaredNorm();
  return {c1 - b * beta, b};
}

UniquenessFit uniqueness_experiment(const AngleWeightFunction& f, std::span<const int> ms, double t,
                                    const ExteriorConfig& cfg) {
  UniquenessFit fit;
  std::vector<double> L2, F, I;
  for (const int m : ms) {
    const double t_m = m >= 2 ? std::min(t, 0.8 / (m * m - 1)) : t;
    const FourierSupport body = generate::perturbed(m, t_m);
    const double value = exterior_integral(body, f, cfg).value;
    fit.samples.push_back({m, t_m, perimeter(body), area(body), value});
    L2.push_back(perimeter(body) * perimeter(body));
    F.push_back(area(body));
    I.push_back(value);
  }
  std::tie(fit.a, fit.b) = fit_two_parameter(L2, F, I);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < I.size(); ++i) {
    worst = std::max(worst, std::abs(I[i] - fit.a * L2[i] - fit.b * F[i]));
    scale = std::max(scale, std::abs(I[i]));
  }
  fit.residual = worst / scale;
  return fit;
}

}  // namespace visang
