#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>

#include "corr/corr_driver.hpp"
#include "oracles.hpp"

using corr::CorrConfig;
using corr::Point;

namespace {

corr::DiagonalQuadratic planted(int n, std::uint64_t seed) {
  corr::Rng rng(seed);
  Eigen::VectorXd a(n);
  for (int i = 0; i < n; ++i) a[i] = 0.5 + 2.0 * rng.uniform();
  return corr::DiagonalQuadratic(a, rng.ball_point(n, 1.5));
}

CorrConfig config(std::size_t T, std::uint64_t seed) {
  CorrConfig cfg;
  cfg.T = T;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(CorrDriver, EstimateR) {
  corr::SamplePair pair;
  pair.fit.values.resize(2);
  pair.fit.values << 0.0, 0.5;
  pair.mean.values.resize(1);
  pair.mean.values << -0.2;
  EXPECT_EQ(corr::estimate_R(pair), 0.5);
  EXPECT_EQ(corr::estimate_R(pair, 3.0), 3.0);
  pair.mean.values[0] = -0.9;
  EXPECT_EQ(corr::estimate_R(pair), 0.9);
}

TEST(CorrDriver, EstimateRSalomon) {
  // the largest value of f_S on [-2, 2]; every sample lies below it
  const double fmax = oracle::grid_max_1d([](double x) { return oracle::salomon_radial(std::abs(x)); },
                                          2.0, 400001);
  EXPECT_NEAR(fmax, 2.75, 0.01);
  const auto s = corr::make_function("salomon", 1);
  const auto pair = corr::draw_samples(s, 10000, 3);
  const double R = corr::estimate_R(pair);
  EXPECT_LE(R, fmax + 1e-12);
  EXPECT_GE(R, 0.98 * fmax);
}

TEST(CorrDriver, OptAtTrueMeanRecoversQuadratic) {
  for (int n : {1, 2, 3}) {
    const auto q = planted(n, 40 + n);
    const auto pair = corr::draw_samples(q, 200, n);
    const auto out = corr::opt_procedure(pair.mean.values.mean(), pair, config(200, n));
    EXPECT_LT((out.x - q.x_star()).norm(), 1e-6) << n;
  }
}

TEST(CorrDriver, SelectedMuBeatsEmpiricalMean) {
  const auto f = corr::make_function("salomon_sq", 1);
  const CorrConfig cfg = config(500, 0);
  const auto pair = corr::draw_samples(f, 500, 0);
  const auto at_mean = corr::opt_procedure(pair.mean.values.mean(), pair, cfg);
  const auto res = corr::corr_optimize(f, cfg);
  EXPECT_GT(f.evaluate(at_mean.x) - f.f_star(), res.f_hat - f.f_star());
}

TEST(CorrDriver, SingleSample) {
  const auto s = corr::make_function("salomon", 2);
  const auto res = corr::corr_optimize(s, config(1, 5));
  EXPECT_LE(res.x_hat.norm(), 2.0 * (1 + 1e-12));
  EXPECT_TRUE(std::isfinite(res.f_hat));
  EXPECT_EQ(res.f_hat, s.evaluate(res.x_hat));
}

TEST(CorrDriver, ProfileContract) {
  const auto f = corr::make_function("salomon_sq", 1);
  CorrConfig cfg = config(2000, 7);
  const auto pair = corr::draw_samples(f, cfg.T, cfg.seed);
  const auto search = corr::search_mu(f, pair, cfg);
  ASSERT_EQ(static_cast<int>(search.profile.size()), cfg.probe_count());
  EXPECT_LE(search.bracket_lo, search.mu_hat);
  EXPECT_GE(search.bracket_hi, search.mu_hat);
  const double step = 2.0 * search.R_hat / (cfg.mu_grid_points - 1);
  EXPECT_LE(search.bracket_hi - search.bracket_lo, 2.0 * step + 1e-12);
  for (const auto& p : search.profile) EXPECT_LE(search.f_hat, p.f_value);
  // ties go to the smaller mu
  for (const auto& p : search.profile) {
    if (p.f_value == search.f_hat) {
      EXPECT_GE(p.mu, search.mu_hat);
    }
  }
  EXPECT_TRUE(std::is_sorted(search.incumbent.rbegin(), search.incumbent.rend()));
  EXPECT_EQ(f.evaluate(search.x_hat), search.f_hat);

  int good = 0;
  for (const auto& p : search.profile)
    if (!p.refinement && p.f_value - f.f_star() < 0.1) ++good;
  EXPECT_GE(good, (cfg.mu_grid_points + 3) / 4);
}

TEST(CorrDriver, PlantedQuadratic) {
  for (int n : {1, 3}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto q = planted(n, 100 + seed);
      const auto res = corr::corr_optimize(q, config(500, seed));
      EXPECT_LT(res.f_hat - q.f_star(), 1e-6);
    }
  }
}

TEST(CorrDriver, Salomon1DMedian) {
  const auto s = corr::make_function("salomon", 1);
  std::vector<double> errs;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    errs.push_back(corr::corr_optimize(s, config(500, seed)).f_hat - s.f_star());
  EXPECT_LT(oracle::median(errs), 0.1);
}

TEST(CorrDriver, EvalCountAndPolish) {
  const auto s = corr::make_function("salomon", 2);
  CorrConfig cfg = config(300, 2);
  const auto plain = corr::corr_optimize(s, cfg);
  EXPECT_EQ(plain.eval_count, 2 * 300 + cfg.probe_count());
  EXPECT_EQ(plain.polish_evals, 0);
  cfg.polish = true;
  cfg.polish_budget = 500;
  const auto hybrid = corr::corr_optimize(s, cfg);
  EXPECT_LE(hybrid.f_hat, plain.f_hat);
  EXPECT_EQ(hybrid.f_before_polish, plain.f_hat);
  EXPECT_LE(hybrid.polish_evals, 500);
  EXPECT_EQ(hybrid.eval_count, plain.eval_count + hybrid.polish_evals);
}

TEST(CorrDriver, Deterministic) {
  const auto s = corr::make_function("langerman", 2);
  const auto a = corr::corr_optimize(s, config(400, 9));
  const auto b = corr::corr_optimize(s, config(400, 9));
  EXPECT_EQ(a.x_hat, b.x_hat);
  EXPECT_EQ(a.f_hat, b.f_hat);
  EXPECT_EQ(a.mu_hat, b.mu_hat);
  EXPECT_EQ(a.theta_hat.flat(), b.theta_hat.flat());
  ASSERT_EQ(a.profile.size(), b.profile.size());
  for (std::size_t i = 0; i < a.profile.size(); ++i) EXPECT_EQ(a.profile[i].f_value, b.profile[i].f_value);
}

TEST(CorrDriver, ConfigErrors) {
  CorrConfig cfg;
  cfg.T = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = CorrConfig{};
  cfg.mu_grid_points = 2;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = CorrConfig{};
  cfg.r_override = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  const auto s = corr::make_function("salomon", 1);
  cfg = CorrConfig{};
  cfg.polish_budget = -1;
  EXPECT_THROW(corr::corr_optimize(s, cfg), std::invalid_argument);
}
