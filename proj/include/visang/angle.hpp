#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string_view>

#include "visang/support.hpp"

namespace visang {

/// Visual angle w of the body seen from one exterior point. `phi` is the
/// normal angle of the first tangent line (counter-clockwise order), `theta`
/// the polar angle of the point.
struct VisualAngleSample {
  double R = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  double w = 0.0;
  std::optional<double> w_phi;
  /// |p^2 + p1^2 + 2 p p1 cos w - R^2 sin^2 w| / R^2 at the solution.
  double relation_residual = 0.0;
};

/// Normal angles phi1 < phi2 of the two support lines through a point; the
/// arc between them is where the point lies beyond the support line.
struct TangentNormals {
  double first;
  double second;
};

/// Visual angle by tangency: roots of h(phi) = <P, (cos phi, sin phi)> - p(phi).
///
/// The support function is cached on a bracketing grid of 4 max(64, 8K) cells
/// so that repeated queries for one body only pay for refinement.
class TangentSolver {
 public:
  explicit TangentSolver(const FourierSupport& body, double abs_tol = 1e-12);

  TangentNormals normals(const Eigen::Vector2d& point) const;
  VisualAngleSample operator()(const Eigen::Vector2d& point) const;
  double angle(const Eigen::Vector2d& point) const;

  const FourierSupport& body() const { return body_; }
  int cells() const { return cells_; }

 private:
  double h(const Eigen::Vector2d& point, double phi) const;

  FourierSupport body_;
  double abs_tol_;
  int cells_;
  Eigen::ArrayXd cos_;
  Eigen::ArrayXd sin_;
  Eigen::ArrayXd p_;
};

VisualAngleSample visual_angle_point(const FourierSupport& body, const Eigen::Vector2d& point);

enum class FiniteDifferenceCheck { Never, Sampled, Always };

struct AngleOptions {
  double abs_tol = 1e-12;
  double fd_step = 1e-5;
  double fd_rel_tol = 1e-4;
#ifdef NDEBUG
  FiniteDifferenceCheck fd_check = FiniteDifferenceCheck::Sampled;
#else
  FiniteDifferenceCheck fd_check = FiniteDifferenceCheck::Always;
#endif
  /// Receives a message when the implicit w_phi disagrees with the finite
  /// difference. Null means std::clog.
  std::function<void(std::string_view)> diagnostic;
};

struct WPhiResult {
  /// Implicit derivative of the fundamental relation.
  double implicit = 0.0;
  /// Same numerator over the denominator R^2 sin w cos w + p1 p1' + p p1' + p p1.
  double printed = 0.0;
  std::optional<double> finite_difference;
  bool consistent = true;
};

/// The circle of radius R about the origin, parametrized by the normal angle
/// phi of the support line through each point: theta = phi + arccos(p(phi)/R).
///
/// Construction throws CircleTooSmall unless R > max p and theta(phi) is
/// strictly increasing on the check grid.
class CircleCoordinates {
 public:
  CircleCoordinates(const FourierSupport& body, double R, AngleOptions options = {});

  double radius() const { return R_; }
  const FourierSupport& body() const { return body_; }

  Eigen::Vector2d point(double phi) const;
  double theta(double phi) const;
  /// d theta / d phi = 1 - p' / sqrt(R^2 - p^2).
  double jacobian(double phi) const;
  double phi_of_theta(double theta) const;

  /// Root in (0, pi) of arccos(p/R) + arccos(p1/R) = pi - w, p1 = p(phi + pi - w).
  double w(double phi) const;
  VisualAngleSample sample(double phi) const;
  /// Residual of p^2 + p1^2 + 2 p p1 cos w - R^2 sin^2 w, divided by R^2.
  double relation_residual(double phi, double w) const;

  WPhiResult w_phi(double phi, double w) const;
  WPhiResult w_phi(double phi) const { return w_phi(phi, this->w(phi)); }

 private:
  bool should_check(double phi) const;

  FourierSupport body_;
  double R_;
  AngleOptions options_;
};

VisualAngleSample visual_angle_on_circle(const FourierSupport& body, double R, double phi);
double w_phi_on_circle(const FourierSupport& body, double R, double phi);
double polar_to_body_param(const FourierSupport& body, double R, double theta);

struct CircleMeans {
  double R;
  int grid;
  double phi_integral;          // R * int w dphi
  double theta_integral;        // R * int w dtheta
  double phi_energy;            // int R^2 (w^2 - w_phi^2) dphi
  double theta_energy;          // int R^2 (w^2 - w_theta^2) dtheta
  double twice_perimeter;       // 2L
  double width_energy;          // int (a^2 - a'^2) dphi
  double eight_area;            // 8F
  double max_printed_deviation; // max |printed - implicit| w_phi over the grid
};

CircleMeans circle_mean_estimates(const FourierSupport& body, double R, int grid = 1024);

}  // namespace visang
