#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "corr/testbed.hpp"

namespace corr {

enum class Method { corr, corr_hybrid, random_search, simulated_annealing, nelder_mead };

std::string_view to_string(Method method);
Method parse_method(std::string_view token);

struct BaselineResult {
  Method method = Method::random_search;
  Point x_best;
  double f_best = 0.0;
  std::int64_t eval_count = 0;
  std::vector<double> best_so_far;  // incumbent value after each evaluation
};

// Best of `budget` uniform draws from the domain ball.
BaselineResult random_search(const Objective& fn, std::int64_t budget, std::uint64_t seed);

struct AnnealingOptions {
  double t0 = 1.0;
  double cooling = 0.995;
  double step_scale = 0.3;
};

/// Metropolis search with temperature t_k = t0 * cooling^k after k proposals.
/// Gaussian proposals of scale step_scale are projected onto the ball; with
/// t0 = 0 only non-worsening moves are accepted. Uses exactly `budget`
/// evaluations (one for the random start).
BaselineResult simulated_annealing(const Objective& fn, std::int64_t budget,
                                   std::uint64_t seed, const AnnealingOptions& options = {});

// Nelder-Mead from x0 (the start is evaluated and charged to the budget).
BaselineResult nelder_mead(const Objective& fn, const Point& x0, std::int64_t budget);

}  // namespace corr
