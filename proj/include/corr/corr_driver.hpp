#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "corr/envelope_regression.hpp"
#include "corr/nelder_mead.hpp"
#include "corr/sampler.hpp"
#include "corr/surrogate.hpp"
#include "corr/testbed.hpp"

namespace corr {

struct CorrConfig {
  std::size_t T = 500;  // points per sample set; 2T evaluations in total
  std::uint64_t seed = 0;
  int mu_grid_points = 33;
  int refine_iters = 40;  // golden-section evaluations after the grid
  std::optional<double> r_override;
  double box_bound = 1e6;
  double lp_tol = 1e-8;
  double ball_tol = 1e-10;
  bool polish = false;
  std::int64_t polish_budget = 2000;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
  // Objective evaluations spent by the mu search.
  int probe_count() const { return mu_grid_points + refine_iters; }
};

struct SamplePair {
  SampleSet fit;   // residual set
  SampleSet mean;  // mean-constraint set
};

SamplePair draw_samples(const Objective& fn, std::size_t T, std::uint64_t seed);

struct OptOutcome {
  Point x;
  FitResult fit;
};

// Fit the surrogate at `mu`, then minimise it over the domain ball.
// `warm` only changes the starting vertex of the fit.
OptOutcome opt_procedure(double mu, const EnvelopeRegression& regression, const CorrConfig& cfg,
                         double radius = 2.0, const LadBasis* warm = nullptr);
OptOutcome opt_procedure(double mu, const SamplePair& samples, const CorrConfig& cfg,
                         double radius = 2.0);

// max |f| over both sets, or the override when present.
double estimate_R(const SamplePair& samples, std::optional<double> r_override = std::nullopt);

struct ProfilePoint {
  double mu = 0.0;
  double f_value = 0.0;
  bool refinement = false;  // false for grid probes
};

struct MuSearchResult {
  double mu_hat = 0.0;
  double f_hat = 0.0;
  Point x_hat;
  FitResult fit_hat;
  double R_hat = 0.0;
  std::vector<ProfilePoint> profile;  // every probe in evaluation order
  std::vector<double> incumbent;      // best g after each refinement probe
  int best_grid_index = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Searches g(mu) = f(x_mu) over [-R, R]: a uniform grid, then golden-section
/// steps inside the bracket around the best grid point. The sample sets are
/// reused for every probe and each probe costs one evaluation of f. Ties go
/// to the smaller mu.
MuSearchResult search_mu(const Objective& fn, const SamplePair& samples,
                         const CorrConfig& cfg);

struct CorrResult {
  Point x_hat;
  double f_hat = 0.0;
  double mu_hat = 0.0;
  QuadSurrogate theta_hat;
  double R_hat = 0.0;
  std::vector<ProfilePoint> profile;
  std::int64_t eval_count = 0;
  std::int64_t polish_evals = 0;
  double f_before_polish = 0.0;
  double wall_ms = 0.0;
};

CorrResult corr_optimize(const Objective& fn, const CorrConfig& cfg);

// Local Nelder-Mead refinement of a CoRR solution inside the domain.
// `f0`, when known, saves the evaluation of the starting point.
LocalSearchResult polish(const Objective& fn, const Point& x0, std::int64_t budget,
                         std::optional<double> f0 = std::nullopt);

}  // namespace corr
