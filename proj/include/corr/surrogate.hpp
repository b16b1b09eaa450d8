#pragma once

#include "corr/types.hpp"

namespace corr {

/// Diagonal convex quadratic h(x) = <theta1, x^2> + <theta2, x> + theta3.
///
/// The flat parameter layout is (theta1, theta2, theta3), 2n + 1 entries,
/// matching the feature map (x^2, x, 1).
struct QuadSurrogate {
  Eigen::VectorXd theta1;
  Eigen::VectorXd theta2;
  double theta3 = 0.0;

  static QuadSurrogate zero(int dim);
  static QuadSurrogate from_flat(const Eigen::VectorXd& flat);

  int dim() const { return static_cast<int>(theta1.size()); }
  Eigen::Index parameter_count() const { return 2 * theta1.size() + 1; }
  Eigen::VectorXd flat() const;
};

double h_eval(const QuadSurrogate& s, PointRef x);

// (x^2, x, 1) so that h_eval(s, x) == s.flat().dot(features(x)).
Eigen::VectorXd features(PointRef x);

// |x(lambda)| with x(lambda)_i = -theta2_i / (2 theta1_i + 2 lambda).
double secular_norm(const QuadSurrogate& s, double lambda);

/// Exact minimiser of a convex diagonal quadratic over the ball B(0, radius).
///
/// Interior case: the unconstrained minimiser (zero curvature coordinates with
/// zero slope pinned to 0). Boundary case: the root lambda > 0 of
/// |x(lambda)| = radius, found by Newton on 1/|x(lambda)| - 1/radius inside a
/// bisection bracket. An all-zero surrogate returns the origin.
///
/// Throws std::invalid_argument if any theta1 is negative and NonConvergence
/// if the root is not within `tol` after `max_iter` steps.
Point minimize_on_ball(const QuadSurrogate& s, double radius, double tol = 1e-10,
                       int max_iter = 200);

}  // namespace corr
