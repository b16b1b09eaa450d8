#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "corr/sampler.hpp"

using corr::Point;
using corr::PointMatrix;
using corr::SetId;

namespace {

double mean_norm(const PointMatrix& pts) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) s += pts.row(i).norm();
  return s / static_cast<double>(pts.rows());
}

}  // namespace

TEST(Sampler, MeanRadius1D) {
  // E|x| = radius * n / (n + 1)
  for (std::uint64_t seed : {0ull, 7ull, 12345ull}) {
    const PointMatrix pts = corr::draw_ball_uniform(1, 2.0, 100000, seed);
    EXPECT_NEAR(mean_norm(pts), 1.0, 0.02);
  }
}

TEST(Sampler, MeanRadius3D) {
  for (std::uint64_t seed : {1ull, 99ull}) {
    const PointMatrix pts = corr::draw_ball_uniform(3, 2.0, 100000, seed);
    EXPECT_NEAR(mean_norm(pts), 1.5, 0.02);
  }
}

TEST(Sampler, InsideBallAndSymmetric) {
  const PointMatrix pts = corr::draw_ball_uniform(5, 2.0, 50000, 3);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) ASSERT_LE(pts.row(i).norm(), 2.0);
  const Eigen::RowVectorXd m = pts.colwise().mean();
  EXPECT_LT(m.cwiseAbs().maxCoeff(), 0.02);
  // fraction inside half the radius is 2^-5
  int inner = 0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) inner += pts.row(i).norm() < 1.0;
  EXPECT_NEAR(inner / 50000.0, 1.0 / 32.0, 0.004);
}

TEST(Sampler, Deterministic) {
  const PointMatrix a = corr::draw_ball_uniform(4, 2.0, 1000, 42);
  const PointMatrix b = corr::draw_ball_uniform(4, 2.0, 1000, 42);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()), 0);
  const PointMatrix c = corr::draw_ball_uniform(4, 2.0, 1000, 43);
  EXPECT_NE(std::memcmp(a.data(), c.data(), sizeof(double) * a.size()), 0);
}

TEST(Sampler, SetsAreIndependentStreams) {
  auto fn = corr::make_function("salomon", 2);
  const auto one = corr::draw_sample_set(fn, 100, 5, SetId::one);
  const auto two = corr::draw_sample_set(fn, 100, 5, SetId::two);
  EXPECT_NE(std::memcmp(one.points.data(), two.points.data(), sizeof(double) * 200), 0);
  EXPECT_EQ(one.set_id, SetId::one);
  EXPECT_EQ(two.seed, 5u);
}

TEST(Sampler, EvaluateSet) {
  auto s = corr::make_function("salomon", 1);
  PointMatrix origin = PointMatrix::Zero(1, 1);
  auto so = corr::evaluate_set(s, origin, 0, SetId::one);
  EXPECT_EQ(so.values[0], 0.0);

  auto g = corr::make_function("griewank", 2);
  PointMatrix two = PointMatrix::Zero(2, 2);
  two.row(1) = g.x_star().transpose();
  auto sg = corr::evaluate_set(g, two, 0, SetId::one);
  EXPECT_EQ(sg.values[0], 0.0);
  EXPECT_EQ(sg.values[1], 0.0);

  const PointMatrix pts = corr::draw_ball_uniform(1, 2.0, 3, 11);
  auto ss = corr::evaluate_set(s, pts, 11, SetId::two);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(ss.values[i], s.evaluate(pts.row(i).transpose()));
}

TEST(Sampler, Csv) {
  auto s = corr::make_function("salomon", 2);
  const auto set = corr::draw_sample_set(s, 3, 1, SetId::one);
  std::ostringstream out;
  corr::write_sample_csv(out, set);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "index,x_1,x_2,f");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Sampler, UniformAndNormalMoments) {
  corr::Rng rng(2024);
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
}

TEST(Sampler, Errors) {
  EXPECT_THROW(corr::draw_ball_uniform(0, 2.0, 10, 0), std::invalid_argument);
  EXPECT_THROW(corr::draw_ball_uniform(2, -1.0, 10, 0), std::invalid_argument);
  auto s = corr::make_function("salomon", 2);
  EXPECT_THROW(corr::evaluate_set(s, PointMatrix::Zero(2, 3), 0, SetId::one),
               std::invalid_argument);
}
