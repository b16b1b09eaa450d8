#include <gtest/gtest.h>

#include <random>

#include "corr/surrogate.hpp"
#include "oracles.hpp"

using corr::Point;
using corr::QuadSurrogate;

namespace {

QuadSurrogate quad1(double a, double b, double c) {
  Eigen::VectorXd flat(3);
  flat << a, b, c;
  return QuadSurrogate::from_flat(flat);
}

Point vec(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

}  // namespace

TEST(Surrogate, Evaluate) {
  EXPECT_EQ(corr::h_eval(quad1(1, 0, 0), vec({2.0})), 4.0);
  QuadSurrogate s = QuadSurrogate::zero(2);
  s.theta1 << 1, 1;
  EXPECT_EQ(corr::h_eval(s, vec({1.0, 1.0})), 2.0);
  EXPECT_NEAR(corr::h_eval(quad1(2, -3, 5), vec({1.5})), 2 * 2.25 - 4.5 + 5, 1e-15);
  EXPECT_THROW(corr::h_eval(s, vec({1.0})), std::invalid_argument);
}

TEST(Surrogate, Features) {
  Eigen::VectorXd f0 = corr::features(Point::Zero(2));
  Eigen::VectorXd e0(5);
  e0 << 0, 0, 0, 0, 1;
  EXPECT_EQ(f0, e0);
  Eigen::VectorXd f1 = corr::features(vec({2.0}));
  Eigen::VectorXd e1(3);
  e1 << 4, 2, 1;
  EXPECT_EQ(f1, e1);

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd flat(7);
    for (int i = 0; i < 7; ++i) flat[i] = u(gen);
    const QuadSurrogate s = QuadSurrogate::from_flat(flat);
    const Point x = vec({u(gen), u(gen), u(gen)});
    EXPECT_NEAR(corr::h_eval(s, x), flat.dot(corr::features(x)), 1e-13);
    EXPECT_EQ(s.flat(), flat);
  }
  EXPECT_THROW(QuadSurrogate::from_flat(Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST(Surrogate, BallMinimizerExamples) {
  // grid over [-2, 2] at step 1e-5
  {
    const QuadSurrogate s = quad1(1, -8, 0);
    const double best = oracle::ball_min(s.theta1, s.theta2, s.theta3, 2.0, 400000, 0);
    EXPECT_NEAR(corr::minimize_on_ball(s, 2.0)[0], 2.0, 1e-12);
    EXPECT_NEAR(corr::h_eval(s, corr::minimize_on_ball(s, 2.0)), best, 1e-9);
  }
  EXPECT_EQ(corr::minimize_on_ball(quad1(1, 0, 5), 2.0)[0], 0.0);
  EXPECT_NEAR(corr::minimize_on_ball(quad1(0, 3, 0), 2.0)[0], -2.0, 1e-12);
  {
    QuadSurrogate s = QuadSurrogate::zero(2);
    s.theta1 << 1, 4;
    s.theta2 << -6, 0;
    const Point x = corr::minimize_on_ball(s, 2.0);
    EXPECT_NEAR(x[0], 2.0, 1e-9);
    EXPECT_NEAR(x[1], 0.0, 1e-9);
    EXPECT_NEAR(corr::h_eval(s, x), oracle::ball_min(s.theta1, s.theta2, 0.0, 2.0), 1e-9);
  }
  EXPECT_EQ(corr::minimize_on_ball(QuadSurrogate::zero(3), 2.0).norm(), 0.0);
}

TEST(Surrogate, SecularNorm) {
  QuadSurrogate s = QuadSurrogate::zero(2);
  s.theta1 << 1, 2;
  s.theta2 << -4, 2;
  // x_i = -theta2_i / (2 theta1_i + 2 lambda)
  const double lam = 0.5;
  const double x0 = 4.0 / 3.0, x1 = -2.0 / 5.0;
  EXPECT_NEAR(corr::secular_norm(s, lam), std::hypot(x0, x1), 1e-15);
}

TEST(Surrogate, RandomConvexAgainstGrid) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 40; ++k) {
    const int n = 1 + k % 3;
    QuadSurrogate s = QuadSurrogate::zero(n);
    for (int i = 0; i < n; ++i) {
      s.theta1[i] = u(gen) < 0.3 ? 0.0 : 4.0 * u(gen);
      s.theta2[i] = 20.0 * u(gen) - 10.0;
    }
    s.theta3 = u(gen);
    const Point x = corr::minimize_on_ball(s, 2.0);
    ASSERT_LE(x.norm(), 2.0 * (1 + 1e-12));
    const double ref = oracle::ball_min(s.theta1, s.theta2, s.theta3, 2.0, 30, 20000);
    EXPECT_LE(corr::h_eval(s, x), ref + 1e-4);
    EXPECT_GE(corr::h_eval(s, x), ref - 1e-8);
  }
}

TEST(Surrogate, RejectsNonConvex) {
  EXPECT_THROW(corr::minimize_on_ball(quad1(-1, 0, 0), 2.0), std::invalid_argument);
  EXPECT_THROW(corr::minimize_on_ball(quad1(1, 0, 0), 0.0), std::invalid_argument);
}

TEST(Surrogate, NonConvergenceIsReported) {
  QuadSurrogate s = QuadSurrogate::zero(2);
  s.theta1 << 1e-3, 1.0;
  s.theta2 << -50.0, 3.0;
  EXPECT_THROW(corr::minimize_on_ball(s, 2.0, 1e-300, 1), corr::NonConvergence);
}
