#include "visang/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "visang/angle.hpp"
#include "visang/body_io.hpp"
#include "visang/crofton.hpp"
#include "visang/isotopic.hpp"

namespace visang::cli {

using nlohmann::ordered_json;
using std::numbers::pi;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Compare { Relative, Absolute, AtMost, AtLeast };

constexpr const char* to_string(Compare c) {
  switch (c) {
    case Compare::Relative: return "relative";
    case Compare::Absolute: return "absolute";
    case Compare::AtMost: return "at_most";
    case Compare::AtLeast: return "at_least";
  }
  return "?";
}

class Report {
 public:
  explicit Report(std::string command) {
    j_["schema"] = kSchemaVersion;
    j_["command"] = std::move(command);
  }

  void body(const std::string& key, const FourierSupport& b, const std::string& source) {
    ordered_json d;
    d["source"] = source;
    d["support"] = to_json(b);
    d["perimeter"] = {{"value", perimeter(b)}, {"tolerance", 0.0}};
    d["area"] = {{"value", area(b)}, {"tolerance", 0.0}};
    j_["bodies"][key] = std::move(d);
  }

  void value(const std::string& name, double v, double tolerance) {
    j_["values"][name] = {{"value", v}, {"tolerance", tolerance}};
  }

  void grid(const std::string& name, int n) { j_["grids"][name] = n; }

  /// For AtMost / AtLeast, `tolerance` is a relative slack on `expected`.
  bool check(const std::string& name, double value, double expected, double tolerance, Compare how) {
    double error = 0.0;
    bool pass = false;
    switch (how) {
      case Compare::Relative:
        error = std::abs(value - expected) / std::abs(expected);
        pass = error <= tolerance;
        break;
      case Compare::Absolute:
        error = std::abs(value - expected);
        pass = error <= tolerance;
        break;
      case Compare::AtMost:
        error = value - expected;
        pass = value <= expected + tolerance * std::abs(expected);
        break;
      case Compare::AtLeast:
        error = expected - value;
        pass = value >= expected - tolerance * std::abs(expected);
        break;
    }
    j_["checks"].push_back({{"name", name},
                            {"value", value},
                            {"expected", expected},
                            {"error", error},
                            {"tolerance", tolerance},
                            {"compare", to_string(how)},
                            {"pass", pass}});
    return pass;
  }

  ordered_json& section(const std::string& key) { return j_[key]; }

  void error(const GeometryError& e) { j_["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}}; }
  void error(const std::exception& e) { j_["error"] = {{"kind", "Internal"}, {"message", e.what()}}; }

  bool passed() const {
    if (j_.contains("error")) return false;
    if (!j_.contains("checks")) return true;
    for (const auto& c : j_["checks"]) {
      if (!c["pass"].get<bool>()) return false;
    }
    return true;
  }

  ordered_json finish(std::optional<double> seconds) {
    j_["pass"] = passed();
    if (seconds) j_["wall_seconds"] = *seconds;
    return j_;
  }

 private:
  ordered_json j_;
};

/// VAL_GRID replaces every default grid size; explicit flags still win.
int grid_or(int explicit_value, int fallback) {
  if (explicit_value > 0) return explicit_value;
  if (const char* env = std::getenv("VAL_GRID"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 16 || n > (1 << 22)) throw UsageError(std::string("VAL_GRID must be an integer in [16, 4194304], got ") + env);
    return static_cast<int>(n);
  }
  return fallback;
}

FourierSupport load_body(const std::string& path) {
  try {
    return read_body(path);
  } catch (const GeometryError& e) {
    throw UsageError(e.what());
  }
}

Eigen::Vector2d parse_point(const std::string& text) {
  std::istringstream in(text);
  double x = 0.0, y = 0.0;
  char comma = 0;
  if (!(in >> x >> comma >> y) || comma != ',' || !(in >> std::ws).eof()) {
    throw UsageError("--point expects x,y, got '" + text + "'");
  }
  return {x, y};
}

AngleWeightFunction parse_weight(const std::string& name, double lambda) {
  if (name == "crofton") return weights::crofton(lambda);
  if (name == "sin3") return weights::sin3();
  if (name == "sin3_over_cos2") return weights::sin3_over_cos2();
  if (name == "cubic") return weights::cubic();
  if (name == "quintic_crofton") return weights::quintic_crofton();
  try {
    return weights::expression(name);
  } catch (const GeometryError& e) {
    throw UsageError(std::string("--f: ") + e.what());
  }
}

/// CSV sink: a file, or stdout for "csv" and "-".
class Emitter {
 public:
  Emitter(const std::string& target, std::ostream& out) {
    if (target.empty()) return;
    if (target == "csv" || target == "-") {
      stream_ = &out;
      to_stdout_ = true;
      return;
    }
    file_.open(target);
    if (!file_) throw UsageError("cannot write " + target);
    stream_ = &file_;
  }
  explicit operator bool() const { return stream_ != nullptr; }
  std::ostream& stream() { return *stream_; }
  bool to_stdout() const { return to_stdout_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
  bool to_stdout_ = false;
};

ExteriorConfig exterior_config(int theta_nodes, double r_max_factor) {
  ExteriorConfig cfg;
  cfg.theta_nodes = grid_or(theta_nodes, cfg.theta_nodes);
  if (r_max_factor > 0.0) cfg.r_max_factor = r_max_factor;
  return cfg;
}

ordered_json integral_json(const ExteriorIntegralResult& r) {
  return {{"weight", r.weight},
          {"value", r.value},
          {"tolerance", r.tail},
          {"tail", r.tail},
          {"r_max", r.r_max},
          {"theta_nodes", r.theta_nodes},
          {"gauss_nodes", r.gauss_nodes},
          {"radial_slabs", r.radial_slabs}};
}

// ---------------------------------------------------------------- angle

struct AngleArgs {
  std::string body;
  std::string point;
  double circle = 0.0;
  int grid = 0;
  std::string emit;
};

void cmd_angle(const AngleArgs& a, Report& rep, std::ostream& out, bool& csv_on_stdout) {
  if (a.point.empty() == (a.circle <= 0.0)) throw UsageError("angle needs exactly one of --point or --circle");
  const FourierSupport body = load_body(a.body);
  rep.body("body", body, a.body);

  if (!a.point.empty()) {
    const Eigen::Vector2d P = parse_point(a.point);
    const TangentSolver solver(body);
    const TangentNormals n = solver.normals(P);
    const VisualAngleSample s = solver(P);
    rep.value("w", s.w, 1e-12);
    rep.value("phi1", n.first, 1e-12);
    rep.value("phi2", n.second, 1e-12);
    rep.value("theta", s.theta, 0.0);
    rep.value("R", s.R, 0.0);
    rep.check("relation_residual", s.relation_residual, 0.0, 1e-9, Compare::Absolute);
    return;
  }

  const int n = grid_or(a.grid, 1024);
  rep.grid("phi", n);
  std::vector<std::string> diagnostics;
  AngleOptions opts;
  opts.diagnostic = [&](std::string_view msg) { diagnostics.emplace_back(msg); };
  const CircleCoordinates cc(body, a.circle, opts);
  Emitter emit(a.emit, out);
  csv_on_stdout = emit.to_stdout();
  if (emit) emit.stream() << "phi,theta,w,w_phi\n" << std::setprecision(17);

  double w_min = pi, w_max = 0.0, w_sum = 0.0, residual = 0.0, printed = 0.0, fd = 0.0;
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * pi * j / n;
    const VisualAngleSample s = cc.sample(phi);
    const WPhiResult wp = cc.w_phi(phi, s.w);
    w_min = std::min(w_min, s.w);
    w_max = std::max(w_max, s.w);
    w_sum += s.w;
    residual = std::max(residual, s.relation_residual);
    printed = std::max(printed, std::abs(wp.printed - wp.implicit));
    if (wp.finite_difference) fd = std::max(fd, std::abs(*wp.finite_difference - wp.implicit));
    if (emit) emit.stream() << phi << ',' << s.theta << ',' << s.w << ',' << wp.implicit << '\n';
  }
  const double h = 2.0 * pi / n;
  rep.value("R", a.circle, 0.0);
  rep.value("w_min", w_min, 1e-12);
  rep.value("w_max", w_max, 1e-12);
  rep.value("R_int_w_dphi", a.circle * h * w_sum, 1e-12 * a.circle * 2.0 * pi);
  rep.value("twice_perimeter", 2.0 * perimeter(body), 0.0);
  rep.value("max_printed_w_phi_deviation", printed, 0.0);
  rep.value("max_finite_difference_w_phi_deviation", fd, opts.fd_rel_tol);
  rep.check("max_relation_residual", residual, 0.0, 1e-9, Compare::Absolute);
  rep.check("w_phi_finite_difference_mismatches", static_cast<double>(diagnostics.size()), 0.0, 0.0,
            Compare::Absolute);
  if (!diagnostics.empty()) rep.section("diagnostics") = diagnostics;
}

// ---------------------------------------------------------------- crofton

struct CroftonArgs {
  std::string body;
  std::string f = "crofton";
  double lambda = 1.0;
  std::vector<int> ms{2, 3, 4, 5};
  double t = 0.08;
  int theta_nodes = 0;
  double r_max_factor = 0.0;
};

void cmd_crofton_check(const CroftonArgs& a, Report& rep) {
  const FourierSupport body = load_body(a.body);
  rep.body("body", body, a.body);
  const ExteriorConfig cfg = exterior_config(a.theta_nodes, a.r_max_factor);
  const CroftonCheck c = crofton_check(body, cfg);
  rep.section("integral") = integral_json(c.integral);
  rep.grid("theta", c.integral.theta_nodes);
  rep.value("rhs", c.rhs, 0.0);
  rep.check("crofton_identity", c.lhs, c.rhs, 1e-3, Compare::Relative);
}

void cmd_crofton_integral(const CroftonArgs& a, Report& rep) {
  const FourierSupport body = load_body(a.body);
  rep.body("body", body, a.body);
  const AngleWeightFunction f = parse_weight(a.f, a.lambda);
  const ExteriorConfig cfg = exterior_config(a.theta_nodes, a.r_max_factor);
  const ExteriorIntegralResult r = exterior_integral(body, f, cfg);
  rep.section("integral") = integral_json(r);
  rep.grid("theta", r.theta_nodes);
  rep.check("series_oracle", r.value, cgr_rhs(body, f), 1e-3, Compare::Relative);
}

void uniqueness_report(const AngleWeightFunction& f, std::span<const int> ms, double t, const ExteriorConfig& cfg,
                       Report& rep, const std::string& prefix, double lambda, bool is_crofton) {
  const UniquenessFit fit = uniqueness_experiment(f, ms, t, cfg);
  ordered_json samples = ordered_json::array();
  for (const auto& s : fit.samples) {
    samples.push_back({{"m", s.m},
                       {"t", s.t},
                       {"perimeter", s.perimeter},
                       {"area", s.area},
                       {"integral", s.integral},
                       {"tolerance", 1e-3 * std::abs(s.integral)}});
  }
  rep.section(prefix + "samples") = samples;
  rep.value(prefix + "a", fit.a, 1e-3);
  rep.value(prefix + "b", fit.b, 1e-3);
  rep.value(prefix + "residual", fit.residual, 1e-3);
  if (is_crofton) {
    rep.check(prefix + "a", fit.a, 0.5 * lambda, 1e-3, Compare::Relative);
    rep.check(prefix + "b", fit.b, -pi * lambda, 1e-3, Compare::Relative);
    rep.check(prefix + "residual", fit.residual, 0.0, 1e-3, Compare::Absolute);
  }
}

void cmd_crofton_uniqueness(const CroftonArgs& a, Report& rep) {
  if (a.ms.size() < 2) throw UsageError("--ms needs at least two values");
  for (int m : a.ms) {
    if (m < 2) throw UsageError("--ms values must be >= 2");
  }
  const AngleWeightFunction f = parse_weight(a.f, a.lambda);
  const ExteriorConfig cfg = exterior_config(a.theta_nodes, a.r_max_factor);
  rep.grid("theta", cfg.theta_nodes);
  rep.section("weight") = f.name;
  uniqueness_report(f, a.ms, a.t, cfg, rep, "", a.lambda, a.f == "crofton");
}

// ---------------------------------------------------------------- isotopic

struct IsotopicArgs {
  std::string body;
  double alpha = 0.0;
  int n = 0;
  std::string emit;
  bool search = false;
  double c0 = 21.5, c2 = 2.5, c6 = 1.0;
  int k = 16;
  std::string out;
  int m = 1, nn = 2;
};

void cmd_isotopic_curve(const IsotopicArgs& a, Report& rep, std::ostream& out, bool& csv_on_stdout) {
  const FourierSupport body = load_body(a.body);
  rep.body("body", body, a.body);
  const IsotopicCurve c = curve(body, a.alpha, grid_or(a.n, 2048));
  rep.grid("phi", c.grid);
  Emitter emit(a.emit, out);
  csv_on_stdout = emit.to_stdout();
  if (emit) {
    emit.stream() << "phi,X,Y\n" << std::setprecision(17);
    for (int j = 0; j < c.grid; ++j) {
      emit.stream() << 2.0 * pi * j / c.grid << ',' << c.points(0, j) << ',' << c.points(1, j) << '\n';
    }
  }
  const double poly = c.polyline_length();
  rep.value("alpha", c.alpha, 0.0);
  rep.value("length", c.length, 1e-12 * c.length);
  rep.value("area", c.area, 1e-12 * std::abs(c.area));
  rep.value("polyline_length", poly, std::abs(poly - c.length));
  rep.value("min_radicand", c.radicand.minCoeff(), 0.0);
  rep.check("visual_angle_on_curve", visual_angle_spot_check(body, c), 0.0, 1e-8, Compare::Absolute);
}

void limits_report(const FourierSupport& body, Report& rep, const std::string& prefix, int grid) {
  const IsotopicLimits l = limits(body, grid);
  rep.value(prefix + "length_sin", l.length_sin, 1e-12);
  rep.value(prefix + "area_sin2", l.area_sin2, 1e-12);
  rep.value(prefix + "ratio", l.ratio, 1e-12);
  ordered_json samples = ordered_json::array();
  for (int i = 0; i < 3; ++i) {
    samples.push_back({{"alpha", l.alphas[i]},
                       {"length_sin", l.sampled_length_sin[i]},
                       {"area_sin2", l.sampled_area_sin2[i]},
                       {"ratio", l.sampled_ratio[i]},
                       {"tolerance", 1e-10}});
  }
  rep.section(prefix + "samples") = samples;
  rep.check(prefix + "width_square_identity", 4.0 * pi * l.area_sin2, l.width_square_integral, 1e-10,
            Compare::Relative);
  rep.check(prefix + "ratio_at_least_one", l.ratio, 1.0, 1e-12, Compare::AtLeast);
  rep.check(prefix + "extrapolated_length_sin", l.extrapolated_length_sin, l.length_sin, 1e-2, Compare::Relative);
  rep.check(prefix + "extrapolated_area_sin2", l.extrapolated_area_sin2, l.area_sin2, 1e-2, Compare::Relative);
  rep.check(prefix + "extrapolated_ratio", l.extrapolated_ratio, l.ratio, 1e-2, Compare::Relative);
  if (is_constant_width(body).constant_width) {
    rep.check(prefix + "constant_width_ratio", l.ratio, 1.0, 1e-10, Compare::Absolute);
    bool decreasing = true;
    for (int i = 1; i < 3; ++i) {
      decreasing = decreasing && std::abs(l.sampled_ratio[i] - 1.0) < std::abs(l.sampled_ratio[i - 1] - 1.0);
    }
    rep.check(prefix + "ratio_gap_decreasing", decreasing ? 1.0 : 0.0, 1.0, 0.0, Compare::Absolute);
  }
}

void cmd_isotopic_limits(const IsotopicArgs& a, Report& rep) {
  const FourierSupport body = load_body(a.body);
  rep.body("body", body, a.body);
  const int grid = grid_or(a.n, 2048);
  rep.grid("phi", grid);
  limits_report(body, rep, "", grid);
}

void fit_report(const CircleFit& fit, Report& rep, const std::string& prefix) {
  rep.value(prefix + "alpha", fit.alpha, 0.0);
  rep.value(prefix + "radius", fit.radius, fit.deviation * fit.radius);
  rep.value(prefix + "center_x", fit.center.x(), 1e-9);
  rep.value(prefix + "center_y", fit.center.y(), 1e-9);
}

void cmd_isotopic_detect(const IsotopicArgs& a, Report& rep) {
  const FourierSupport body = load_body(a.body);
  rep.body("body", body, a.body);
  const int grid = grid_or(a.n, 1024);
  rep.grid("phi", grid);
  const CircleFit fit = detect_circle(body, a.alpha, a.search, grid);
  fit_report(fit, rep, "");
  rep.check("circle_deviation", fit.deviation, 0.0, kCircleThreshold, Compare::Absolute);
}

void cmd_isotopic_construct(const IsotopicArgs& a, Report& rep) {
  const QuarterConstruction q = construct_quarter(a.c0, a.c2, a.c6, a.k);
  rep.body("body", q.body, a.out.empty() ? "constructed" : a.out);
  if (!a.out.empty()) {
    try {
      write_body(a.out, q.body);
    } catch (const GeometryError& e) {
      throw UsageError(e.what());
    }
  }
  rep.value("projection_error", q.projection_error, 1e-6);
  fit_report(q.fit, rep, "");
  rep.check("circle_deviation", q.fit.deviation, 0.0, kCircleThreshold, Compare::Absolute);
  rep.check("radius", q.fit.radius, q.expected_radius, kCircleThreshold, Compare::Relative);
}

void identities_report(const FourierSupport& body, int m, int n, int grid, Report& rep, const std::string& prefix) {
  const AreaSeries s = area_series(body, m, n, grid);
  rep.value(prefix + "alpha", s.alpha, 0.0);
  rep.value(prefix + "area_series_plus", s.prediction_plus, 1e-6);
  rep.value(prefix + "area_series_minus", s.prediction_minus, 1e-6);
  rep.value(prefix + "area_series_selected_sign", s.selected_sign, 0.0);
  rep.value(prefix + "area_series_rejected_error", s.rejected_relative_error, 1e-6);
  rep.check(prefix + "area_series", s.selected_relative_error, 0.0, 1e-6, Compare::Absolute);

  const ProductIntegral pp = pp1_integral(body, s.alpha);
  rep.check(prefix + "product_integral", pp.quadrature, pp.closed_form, 1e-10, Compare::Relative);

  const CircleIdentity c = perimeter_identity(body, m, n);
  rep.value(prefix + "radius", c.radius, kCircleThreshold * c.radius);
  rep.check(prefix + "perimeter_identity", c.lhs, c.rhs, 1e-4, Compare::Relative);
  rep.check(prefix + "perimeter_bound", c.perimeter, c.perimeter_bound, kCircleThreshold, Compare::AtMost);
  rep.check(prefix + "area_bound", c.area, c.area_bound, 2.0 * kCircleThreshold, Compare::AtMost);
}

void cmd_isotopic_identities(const IsotopicArgs& a, Report& rep) {
  const FourierSupport body = load_body(a.body);
  rep.body("body", body, a.body);
  const int grid = grid_or(a.n, 2048);
  rep.grid("phi", grid);
  identities_report(body, a.m, a.nn, grid, rep, "");
}

// ---------------------------------------------------------------- presets

struct NamedBody {
  std::string name;
  FourierSupport body;
};

std::vector<NamedBody> crofton_suite() {
  return {{"disc", generate::disc(1.0)},
          {"perturbed_2_0.2", generate::perturbed(2, 0.2)},
          {"perturbed_3_0.1", generate::perturbed(3, 0.1)},
          {"perturbed_5_0.03", generate::perturbed(5, 0.03)},
          {"quarter_symmetric", generate::quarter_symmetric().body}};
}

void preset_thm21(Report& rep) {
  const ExteriorConfig cfg = exterior_config(0, 0.0);
  rep.grid("theta", cfg.theta_nodes);
  const std::vector<AngleWeightFunction> ws{weights::crofton(), weights::cubic(), weights::sin3(),
                                            weights::sin3_over_cos2()};
  for (const auto& [name, body] : crofton_suite()) {
    rep.body(name, body, "generated");
    const auto r = exterior_integrals(body, ws, cfg);
    const double L = perimeter(body), F = area(body);
    rep.check(name + ".crofton", r[0].value, 0.5 * L * L - pi * F, 1e-3, Compare::Relative);
    rep.check(name + ".series_crofton", r[0].value, cgr_rhs(body, ws[0]), 1e-3, Compare::Relative);
    rep.check(name + ".series_cubic", r[1].value, cgr_rhs(body, ws[1]), 1e-3, Compare::Relative);
    if (name == "disc") {
      rep.check(name + ".sin3", r[2].value, L * L, 1e-3, Compare::Relative);
      rep.check(name + ".sin3_over_cos2", r[3].value, 4.0 * pi * F, 1e-3, Compare::Relative);
    }
  }
  const std::vector<int> ms{2, 3, 4, 5};
  uniqueness_report(weights::crofton(), ms, 0.08, cfg, rep, "uniqueness.crofton.", 1.0, true);
  uniqueness_report(weights::sin3(), ms, 0.08, cfg, rep, "uniqueness.sin3.", 1.0, false);
  auto& v = rep.section("values");
  const double rc = v["uniqueness.crofton.residual"]["value"].get<double>();
  const double rs = v["uniqueness.sin3.residual"]["value"].get<double>();
  rep.check("uniqueness.sin3_residual_vs_crofton", rs, 10.0 * rc, 0.0, Compare::AtLeast);
}

void preset_thm31(Report& rep) {
  const int grid = grid_or(0, 1024);
  rep.grid("phi", grid);
  const std::vector<NamedBody> bodies{{"perturbed_3_0.1", generate::perturbed(3, 0.1)},
                                      {"symmetric_2_0.1", generate::perturbed(2, 0.1)}};
  for (const auto& [name, body] : bodies) {
    rep.body(name, body, "generated");
    const double mp = max_support(body);
    const CircleMeans near = circle_mean_estimates(body, 100.0 * mp, grid);
    const CircleMeans far = circle_mean_estimates(body, 200.0 * mp, grid);
    const double e_near = std::abs(near.phi_integral - near.twice_perimeter) / near.twice_perimeter;
    const double e_far = std::abs(far.phi_integral - far.twice_perimeter) / far.twice_perimeter;
    rep.check(name + ".perimeter_limit_100", near.phi_integral, near.twice_perimeter, 1e-2, Compare::Relative);
    rep.check(name + ".perimeter_limit_200", far.phi_integral, far.twice_perimeter, 1e-2, Compare::Relative);
    rep.check(name + ".perimeter_error_decreasing", e_far, e_near, 0.0, Compare::AtMost);
    const double g_near = std::abs(near.theta_integral - near.phi_integral) / near.twice_perimeter;
    const double g_far = std::abs(far.theta_integral - far.phi_integral) / far.twice_perimeter;
    rep.check(name + ".theta_vs_phi_200", far.theta_integral, far.phi_integral, 1e-2, Compare::Relative);
    rep.check(name + ".theta_phi_gap_decreasing", g_far, g_near, 0.0, Compare::AtMost);
    rep.check(name + ".width_energy_200", far.phi_energy, far.width_energy, 1e-2, Compare::Relative);
    rep.check(name + ".theta_energy_200", far.theta_energy, far.width_energy, 1e-2, Compare::Relative);
    if (name.starts_with("symmetric")) {
      rep.check(name + ".area_limit_200", far.phi_energy, far.eight_area, 1e-2, Compare::Relative);
    }
    rep.value(name + ".max_printed_w_phi_deviation_200", far.max_printed_deviation, 0.0);
  }
}

void preset_thm41(Report& rep) {
  const int grid = grid_or(0, 2048);
  rep.grid("phi", grid);
  const std::vector<NamedBody> bodies{{"constant_width_3_0.05", generate::perturbed(3, 0.05)},
                                      {"symmetric_2_0.1", generate::perturbed(2, 0.1)}};
  for (const auto& [name, body] : bodies) {
    rep.body(name, body, "generated");
    limits_report(body, rep, name + ".", grid);
  }
  const double ratio = rep.section("values")["symmetric_2_0.1.ratio"]["value"].get<double>();
  rep.check("symmetric_2_0.1.ratio_above_one", ratio, 1.0, 0.0, Compare::AtLeast);
}

void preset_thm51(Report& rep) {
  const int grid = grid_or(0, 1024);
  rep.grid("phi", grid);
  const std::vector<double> alphas = alpha_grid(64);
  rep.grid("alpha", static_cast<int>(alphas.size()));
  std::mt19937_64 rng(51);
  for (int i = 0; i < 10; ++i) {
    const FourierSupport body = generate::random_constant_width(rng);
    const std::string name = "random_" + std::to_string(i);
    rep.body(name, body, "mt19937_64 seed 51");
    const DiscTestReport r = constant_width_disc_test(body, alphas, true, grid);
    rep.value(name + ".alpha_at_min", r.alpha_at_min, 0.0);
    rep.value(name + ".noise_floor", r.noise_floor, 0.0);
    rep.check(name + ".min_deviation_above_floor", r.min_deviation, r.threshold, 0.0, Compare::AtLeast);
  }
}

void preset_quarter(Report& rep, bool area_side) {
  const int grid = grid_or(0, 2048);
  rep.grid("phi", grid);
  const QuarterConstruction q = construct_quarter(21.5, 2.5, 1.0);
  rep.body("quarter_symmetric", q.body, "generated");
  rep.value("projection_error", q.projection_error, 1e-6);
  fit_report(q.fit, rep, "");
  rep.check("circle_deviation", q.fit.deviation, 0.0, kCircleThreshold, Compare::Absolute);
  rep.check("radius", q.fit.radius, std::sqrt(43.0), kCircleThreshold, Compare::Relative);
  const CircleIdentity c = perimeter_identity(q.body, 1, 2, q.fit);
  rep.check("perimeter_identity", c.lhs, c.rhs, 1e-4, Compare::Relative);
  if (!area_side) {
    rep.check("perimeter_bound", c.perimeter, 2.0 * pi * std::sqrt(43.0) * std::sin(pi / 4), kCircleThreshold,
              Compare::AtMost);
    return;
  }
  rep.check("area_bound", c.area, 21.5 * pi, 2.0 * kCircleThreshold, Compare::AtMost);
  const AreaSeries s = area_series(q.body, 1, 2, grid);
  rep.value("area_series_selected_sign", s.selected_sign, 0.0);
  rep.check("area_series", s.selected_relative_error, 0.0, 1e-6, Compare::Absolute);
  const ProductIntegral pp = pp1_integral(q.body, pi / 2);
  rep.check("product_integral", pp.quadrature, pp.closed_form, 1e-10, Compare::Relative);
}

void run_preset(const std::string& name, Report& rep) {
  if (name == "thm21") return preset_thm21(rep);
  if (name == "thm31") return preset_thm31(rep);
  if (name == "thm41") return preset_thm41(rep);
  if (name == "thm51") return preset_thm51(rep);
  if (name == "thm52") return preset_quarter(rep, false);
  if (name == "thm53") return preset_quarter(rep, true);
  throw UsageError("unknown preset " + name);
}

}  // namespace

RunReport run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Visual angles of planar convex bodies given by Fourier support functions", "visang"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string preset;
  bool timing = false;
  app.add_option("--preset", preset, "Run a built-in demonstration")
      ->check(CLI::IsMember({"thm21", "thm31", "thm41", "thm51", "thm52", "thm53"}));
  app.add_flag("--timing", timing, "Add wall-clock seconds to the report");

  AngleArgs aa;
  auto* angle = app.add_subcommand("angle", "Visual angle at a point or around a circle");
  angle->add_option("--body", aa.body, "Body JSON")->required();
  angle->add_option("--point", aa.point, "Exterior point x,y");
  angle->add_option("--circle", aa.circle, "Circle radius R");
  angle->add_option("--grid", aa.grid, "Samples on the circle");
  angle->add_option("--emit", aa.emit, "CSV path (phi,theta,w,w_phi); 'csv' or '-' for stdout");

  CroftonArgs ca;
  auto* crofton = app.add_subcommand("crofton", "Exterior integrals of angle weights");
  crofton->require_subcommand(1);
  auto* c_check = crofton->add_subcommand("check", "Crofton identity for one body");
  auto* c_integral = crofton->add_subcommand("integral", "Exterior integral against the series oracle");
  auto* c_unique = crofton->add_subcommand("uniqueness", "Fit I = a L^2 + b F over p = 1 + t cos(m phi)");
  for (auto* sub : {c_check, c_integral}) sub->add_option("--body", ca.body, "Body JSON")->required();
  for (auto* sub : {c_integral, c_unique}) {
    sub->add_option("--f", ca.f, "crofton|sin3|sin3_over_cos2|cubic|quintic_crofton|<expression in w>");
    sub->add_option("--lambda", ca.lambda, "Scale of the crofton weight");
  }
  c_unique->add_option("--ms", ca.ms, "Harmonics m")->delimiter(',');
  c_unique->add_option("--t", ca.t, "Perturbation size");
  for (auto* sub : {c_check, c_integral, c_unique}) {
    sub->add_option("--theta-nodes", ca.theta_nodes, "Trapezoidal nodes in theta");
    sub->add_option("--r-max-factor", ca.r_max_factor, "R_max in units of 2 max p");
  }

  IsotopicArgs ia;
  auto* iso = app.add_subcommand("isotopic", "Isotopic curves and circles");
  iso->require_subcommand(1);
  auto* i_curve = iso->add_subcommand("curve", "Trace C_alpha");
  auto* i_limits = iso->add_subcommand("limits", "Limits of L(alpha) and F(alpha) as alpha -> 0");
  auto* i_detect = iso->add_subcommand("detect", "Test whether C_alpha is a circle");
  auto* i_construct = iso->add_subcommand("construct", "Body with an isotopic circle at alpha = pi/2");
  auto* i_ident = iso->add_subcommand("identities", "Area series, product integral and circle identity");
  for (auto* sub : {i_curve, i_limits, i_detect, i_ident}) sub->add_option("--body", ia.body, "Body JSON")->required();
  for (auto* sub : {i_curve, i_detect}) sub->add_option("--alpha", ia.alpha, "Angle in (0, pi)")->required();
  for (auto* sub : {i_curve, i_limits}) sub->add_option("--n", ia.n, "Samples on the curve");
  i_detect->add_option("--grid", ia.n, "Samples in phi");
  i_curve->add_option("--emit", ia.emit, "CSV path (phi,X,Y); 'csv' or '-' for stdout");
  i_detect->add_flag("--search-center", ia.search, "Optimize the circle centre");
  i_construct->add_option("--c0", ia.c0);
  i_construct->add_option("--c2", ia.c2);
  i_construct->add_option("--c6", ia.c6);
  i_construct->add_option("--k", ia.k, "Truncation order");
  i_construct->add_option("--out", ia.out, "Write the body JSON here");
  // On identities --n is the denominator of alpha, so sampling moves to --grid.
  i_ident->add_option("--m", ia.m, "alpha = pi - (m/n) pi");
  i_ident->add_option("--n", ia.nn, "alpha = pi - (m/n) pi");
  i_ident->add_option("--grid", ia.n, "Samples on the curve");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {{}, code == 0 ? kPass : kUsage};
  }

  std::string command;
  if (!preset.empty()) {
    if (!app.get_subcommands().empty()) {
      err << "error: --preset cannot be combined with a subcommand\n";
      return {{}, kUsage};
    }
    command = "preset " + preset;
  } else if (app.get_subcommands().empty()) {
    err << "error: a subcommand or --preset is required\n" << app.help();
    return {{}, kUsage};
  } else {
    for (const CLI::App* sub = app.get_subcommands().front(); sub;) {
      command += (command.empty() ? "" : " ") + sub->get_name();
      const auto next = sub->get_subcommands();
      sub = next.empty() ? nullptr : next.front();
    }
  }

  Report rep(command);
  bool csv_on_stdout = false;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (!preset.empty()) run_preset(preset, rep);
    else if (angle->parsed()) cmd_angle(aa, rep, out, csv_on_stdout);
    else if (c_check->parsed()) cmd_crofton_check(ca, rep);
    else if (c_integral->parsed()) cmd_crofton_integral(ca, rep);
    else if (c_unique->parsed()) cmd_crofton_uniqueness(ca, rep);
    else if (i_curve->parsed()) cmd_isotopic_curve(ia, rep, out, csv_on_stdout);
    else if (i_limits->parsed()) cmd_isotopic_limits(ia, rep);
    else if (i_detect->parsed()) cmd_isotopic_detect(ia, rep);
    else if (i_construct->parsed()) cmd_isotopic_construct(ia, rep);
    else if (i_ident->parsed()) cmd_isotopic_identities(ia, rep);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return {{}, kUsage};
  } catch (const GeometryError& e) {
    rep.error(e);
  } catch (const std::exception& e) {
    rep.error(e);
  }
  std::optional<double> seconds;
  if (timing) seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  RunReport result{rep.finish(seconds), kPass};
  result.exit_code = result.json["pass"].get<bool>() ? kPass : kFail;
  (csv_on_stdout ? err : out) << result.json.dump(2) << '\n';
  return result;
}

}  // namespace visang::cli
