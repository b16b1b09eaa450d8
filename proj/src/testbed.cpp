#include "corr/testbed.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace corr {

namespace {

constexpr double kPi = std::numbers::pi;

// Slack on the domain test so points produced by radial scaling are accepted.
constexpr double kDomainSlack = 1e-12;

double native_radius(FunctionName name) {
  switch (name) {
    case FunctionName::salomon:
    case FunctionName::salomon_sq:
      return 2.0;
    case FunctionName::salomon_langerman:
      return 10.0;
    case FunctionName::langerman:
      return 5.0;
    case FunctionName::griewank:
      return 200.0;
  }
  return 2.0;
}

double salomon(PointRef z) {
  const double r = z.norm();
  return 1.0 - std::cos(2.0 * kPi * r) + 0.5 * r;
}

double langerman(PointRef z, const Point& center) {
  const double d2 = (z - center).squaredNorm();
  return 1.0 - std::exp(-d2 / kPi) * std::cos(kPi * d2);
}

double griewank(PointRef z) {
  double sum = 0.0;
  double prod = 1.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    sum += z[i] * z[i];
    prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
  }
  return 0.1 * (1.0 + sum / 4000.0 - prod);
}

}  // namespace

std::string_view to_string(FunctionName name) {
  switch (name) {
    case FunctionName::salomon:
      return "salomon";
    case FunctionName::salomon_sq:
      return "salomon_sq";
    case FunctionName::salomon_langerman:
      return "salomon_langerman";
    case FunctionName::langerman:
      return "langerman";
    case FunctionName::griewank:
      return "griewank";
  }
  return "unknown";
}

FunctionName parse_function_name(std::string_view token) {
  for (FunctionName name : kAllFunctions) {
    if (to_string(name) == token) return name;
  }
  throw std::invalid_argument("unknown test function '" + std::string(token) + "'");
}

TestFunction::TestFunction(FunctionName name, int dim)
    : name_(name), dim_(dim), rescale_(native_radius(name) / 2.0) {
  if (dim < 1) throw std::invalid_argument("test function dimension must be >= 1");
  center_ = Point::Zero(dim);
  x_star_ = Point::Zero(dim);
  if (name == FunctionName::langerman || name == FunctionName::salomon_langerman) {
    center_ = Point::Constant(dim, 0.5);
  }
  if (name == FunctionName::langerman) {
    x_star_ = center_ / rescale_;
    if (x_star_.norm() > domain_radius() * (1.0 + kDomainSlack)) {
      throw std::invalid_argument("langerman minimizer leaves the domain for dim > 100");
    }
  }
}

double TestFunction::evaluate_native(PointRef z) const {
  switch (name_) {
    case FunctionName::salomon:
      return salomon(z);
    case FunctionName::salomon_sq: {
      const double s = salomon(z);
      return 0.1 * s * s;
    }
    case FunctionName::salomon_langerman:
      if (z.norm() <= 0.2) return 0.0;
      return salomon(z) + langerman(z, center_);
    case FunctionName::langerman:
      return langerman(z, center_);
    case FunctionName::griewank:
      return griewank(z);
  }
  return 0.0;
}

void check_domain(PointRef x, int dim, double radius) {
  if (x.size() != dim) {
    throw std::invalid_argument("point dimension " + std::to_string(x.size()) +
                                " does not match function dimension " + std::to_string(dim));
  }
  if (!x.allFinite()) throw std::invalid_argument("point has non-finite coordinates");
  if (x.norm() > radius * (1.0 + kDomainSlack)) {
    throw std::invalid_argument("point lies outside the domain ball of radius " +
                                std::to_string(radius));
  }
}

double TestFunction::evaluate(PointRef x) const {
  check_domain(x, dim_, domain_radius());
  const Point z = x * rescale_;
  return evaluate_native(z);
}

DiagonalQuadratic::DiagonalQuadratic(Eigen::VectorXd curvature, Point center, double offset,
                                     double radius)
    : curvature_(std::move(curvature)), center_(std::move(center)), offset_(offset), radius_(radius) {
  if (curvature_.size() < 1) throw std::invalid_argument("quadratic needs dimension >= 1");
  if (center_.size() != curvature_.size()) {
    throw std::invalid_argument("curvature and center differ in length");
  }
  if (!(radius_ > 0.0)) throw std::invalid_argument("radius must be positive");
  if (!((curvature_.array() > 0.0).all()) || !curvature_.allFinite()) {
    throw std::invalid_argument("curvature must be positive and finite");
  }
  if (!center_.allFinite() || center_.norm() > radius_) {
    throw std::invalid_argument("minimizer must lie inside the domain ball");
  }
  if (!std::isfinite(offset_)) throw std::invalid_argument("offset must be finite");
}

double DiagonalQuadratic::evaluate(PointRef x) const {
  check_domain(x, dim(), radius_);
  return curvature_.dot((x - center_).cwiseAbs2()) + offset_;
}

TestFunction make_function(FunctionName name, int dim) { return TestFunction(name, dim); }

TestFunction make_function(std::string_view name, int dim) {
  return TestFunction(parse_function_name(name), dim);
}

}  // namespace corr
