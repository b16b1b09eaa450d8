#pragma once

#include <array>
#include <string_view>
#include <utility>

#include "corr/types.hpp"

namespace corr {

enum class FunctionName { salomon, salomon_sq, salomon_langerman, langerman, griewank };

inline constexpr std::array<FunctionName, 5> kAllFunctions = {
    FunctionName::salomon, FunctionName::salomon_sq, FunctionName::salomon_langerman,
    FunctionName::langerman, FunctionName::griewank};

std::string_view to_string(FunctionName name);

// Accepts the lowercase tokens used by the CLI and config files.
FunctionName parse_function_name(std::string_view token);

/// A black-box objective on a ball centred at the origin.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual int dim() const = 0;
  virtual double domain_radius() const = 0;
  virtual double f_star() const = 0;
  // Throws std::invalid_argument on a dimension mismatch, a non-finite
  // coordinate or a point outside the domain ball.
  virtual double evaluate(PointRef x) const = 0;
};

/// A benchmark objective on the ball B(0, 2).
///
/// Each function is defined on its own native ball B(0, r) and rescaled so
/// that f(x) = f_native(x * r / 2). The global minimum value and one global
/// minimizer (in rescaled coordinates) are known analytically.
///
/// Langerman uses the decaying form 1 - exp(-d^2/pi) cos(pi d^2) with
/// d = |z - c|, c = 0.5 * ones. The Salomon-Langerman combination is zero on
/// the native ball |z| <= 0.2 and f_S + f_L outside of it.
class TestFunction : public Objective {
 public:
  TestFunction(FunctionName name, int dim);

  FunctionName name() const { return name_; }
  int dim() const override { return dim_; }
  double domain_radius() const override { return 2.0; }
  double rescale_factor() const { return rescale_; }
  double f_star() const override { return 0.0; }
  const Point& x_star() const { return x_star_; }
  // Langerman centre in native coordinates; zero for the other functions.
  const Point& center() const { return center_; }

  // Throws std::invalid_argument on a dimension mismatch, a non-finite
  // coordinate or a point outside the domain ball.
  double evaluate(PointRef x) const override;

  // The unscaled formula at native coordinates z; no domain check.
  double evaluate_native(PointRef z) const;

  std::pair<double, Point> global_min() const { return {f_star(), x_star_}; }

 private:
  FunctionName name_;
  int dim_;
  double rescale_;
  Point x_star_;
  Point center_;
};

/// Planted convex model f(x) = sum_i a_i (x_i - c_i)^2 + f0 on B(0, radius),
/// with a_i > 0 and |c| <= radius, so the minimizer c and f* = f0 are known.
class DiagonalQuadratic : public Objective {
 public:
  DiagonalQuadratic(Eigen::VectorXd curvature, Point center, double offset = 0.0,
                    double radius = 2.0);

  int dim() const override { return static_cast<int>(curvature_.size()); }
  double domain_radius() const override { return radius_; }
  double f_star() const override { return offset_; }
  const Point& x_star() const { return center_; }
  const Eigen::VectorXd& curvature() const { return curvature_; }
  double evaluate(PointRef x) const override;

 private:
  Eigen::VectorXd curvature_;
  Point center_;
  double offset_;
  double radius_;
};

// Shared argument checks behind Objective::evaluate.
void check_domain(PointRef x, int dim, double radius);

TestFunction make_function(FunctionName name, int dim);
TestFunction make_function(std::string_view name, int dim);

}  // namespace corr
