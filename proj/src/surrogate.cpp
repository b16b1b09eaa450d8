#include "corr/surrogate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace corr {

QuadSurrogate QuadSurrogate::zero(int dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim), 0.0};
}

QuadSurrogate QuadSurrogate::from_flat(const Eigen::VectorXd& flat) {
  if (flat.size() < 3 || flat.size() % 2 == 0) {
    throw std::invalid_argument("flat parameter vector must have 2n + 1 entries");
  }
  const Eigen::Index n = (flat.size() - 1) / 2;
  return {flat.head(n), flat.segment(n, n), flat[2 * n]};
}

Eigen::VectorXd QuadSurrogate::flat() const {
  const Eigen::Index n = theta1.size();
  Eigen::VectorXd out(2 * n + 1);
  out << theta1, theta2, theta3;
  return out;
}

double h_eval(const QuadSurrogate& s, PointRef x) {
  if (x.size() != s.theta1.size() || s.theta2.size() != s.theta1.size()) {
    throw std::invalid_argument("surrogate and point dimensions differ");
  }
  return s.theta1.dot(x.cwiseAbs2()) + s.theta2.dot(x) + s.theta3;
}

Eigen::VectorXd features(PointRef x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd phi(2 * n + 1);
  phi << x.cwiseAbs2(), x, 1.0;
  return phi;
}

double secular_norm(const QuadSurrogate& s, double lambda) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < s.theta1.size(); ++i) {
    const double xi = -s.theta2[i] / (2.0 * s.theta1[i] + 2.0 * lambda);
    sq += xi * xi;
  }
  return std::sqrt(sq);
}

Point minimize_on_ball(const QuadSurrogate& s, double radius, double tol, int max_iter) {
  const Eigen::Index n = s.theta1.size();
  if (s.theta2.size() != n) throw std::invalid_argument("theta1 and theta2 sizes differ");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s.theta1[i] < 0.0) {
      throw std::invalid_argument("surrogate is not convex: theta1[" + std::to_string(i) +
                                  "] < 0");
    }
  }

  Point x = Point::Zero(n);
  bool unbounded_direction = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s.theta1[i] > 0.0) {
      x[i] = -s.theta2[i] / (2.0 * s.theta1[i]);
    } else if (s.theta2[i] != 0.0) {
      unbounded_direction = true;
    }
  }
  if (!unbounded_direction && x.norm() <= radius) return x;

  // |x(lambda)| <= |theta2| / (2 lambda), so `hi` already lies past the root.
  double lo = 0.0;
  double hi = s.theta2.norm() / (2.0 * radius);
  double lambda = 0.5 * hi;
  for (int iter = 0; iter < max_iter; ++iter) {
    double sq = 0.0;
    double weighted = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double shift = s.theta1[i] + lambda;
      x[i] = -s.theta2[i] / (2.0 * shift);
      sq += x[i] * x[i];
      weighted += x[i] * x[i] / shift;
    }
    const double norm = std::sqrt(sq);
    if (std::abs(norm - radius) <= tol) {
      if (norm > radius) x *= radius / norm;
      return x;
    }
    if (norm > radius) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    // Newton on 1/|x| - 1/radius; d|x|/dlambda = -weighted / |x|.
    const double psi = 1.0 / norm - 1.0 / radius;
    const double dpsi = weighted / (norm * sq);
    double next = lambda - psi / dpsi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    lambda = next;
  }
  throw NonConvergence("secular equation did not converge within " + std::to_string(max_iter) +
                       " iterations");
}

}  // namespace corr
