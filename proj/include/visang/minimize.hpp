#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>

namespace visang::opt {

struct MinimizeResult {
  Eigen::Vector2d x;
  double value;
  int evaluations;
};

/// Nelder-Mead on a 2-D box. Points are clamped to [lo, hi]; stops once the
/// simplex diameter falls below x_tol or max_evals is reached.
template <typename F>
MinimizeResult nelder_mead(F&& f, Eigen::Vector2d start, double step, const Eigen::Vector2d& lo,
                           const Eigen::Vector2d& hi, double x_tol = 1e-9, int max_evals = 2000) {
  const auto clamp = [&](Eigen::Vector2d x) { return x.cwiseMax(lo).cwiseMin(hi).eval(); };
  int evals = 0;
  const auto value = [&](const Eigen::Vector2d& x) {
    ++evals;
    return f(x);
  };

  std::array<Eigen::Vector2d, 3> pts{clamp(start), clamp(start + Eigen::Vector2d(step, 0.0)),
                                     clamp(start + Eigen::Vector2d(0.0, step))};
  std::array<double, 3> vals{value(pts[0]), value(pts[1]), value(pts[2])};

  const auto order = [&] {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    pts = {pts[idx[0]], pts[idx[1]], pts[idx[2]]};
    vals = {vals[idx[0]], vals[idx[1]], vals[idx[2]]};
  };

  for (;;) {
    order();
    const double diameter = std::max((pts[1] - pts[0]).norm(), (pts[2] - pts[0]).norm());
    if (diameter < x_tol || evals >= max_evals) break;

    const Eigen::Vector2d centroid = 0.5 * (pts[0] + pts[1]);
    const Eigen::Vector2d reflected = clamp(centroid + (centroid - pts[2]));
    const double fr = value(reflected);
    if (fr < vals[0]) {
      const Eigen::Vector2d expanded = clamp(centroid + 2.0 * (centroid - pts[2]));
      const double fe = value(expanded);
      if (fe < fr) {
        pts[2] = expanded;
        vals[2] = fe;
      } else {
        pts[2] = reflected;
        vals[2] = fr;
      }
      continue;
    }
    if (fr < vals[1]) {
      pts[2] = reflected;
      vals[2] = fr;
      continue;
    }
    const bool outside = fr < vals[2];
    const Eigen::Vector2d contracted =
        outside ? clamp(centroid + 0.5 * (reflected - centroid)) : clamp(centroid + 0.5 * (pts[2] - centroid));
    const double fc = value(contracted);
    if (fc < (outside ? fr : vals[2])) {
      pts[2] = contracted;
      vals[2] = fc;
      continue;
    }
    // shrink toward the best point
    for (int i = 1; i < 3; ++i) {
      pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
      vals[i] = value(pts[i]);
    }
  }
  order();
  return {pts[0], vals[0], evals};
}

}  // namespace visang::opt
