#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "corr/types.hpp"

namespace corr {

struct NelderMeadOptions {
  double initial_step = 0.1;
  // Simplex diameter at which a run is considered converged.
  double x_tol = 1e-13;
  // Each restart rebuilds the simplex around the incumbent with a step ten
  // times smaller than the previous one; a restart without improvement ends
  // the search.
  int max_restarts = 6;
};

struct LocalSearchResult {
  Point x;
  double f = 0.0;
  std::int64_t evaluations = 0;
};

/// Nelder-Mead with every trial point projected onto B(0, radius).
///
/// Standard coefficients (reflect 1, expand 2, contract 1/2, shrink 1/2).
/// At most `budget` calls to `objective`; when `f0` is given the starting
/// value is not re-evaluated. The returned point is the best ever seen, so it
/// is never worse than x0.
LocalSearchResult nelder_mead_minimize(const std::function<double(const Point&)>& objective,
                                       const Point& x0, std::optional<double> f0,
                                       std::int64_t budget, double radius,
                                       const NelderMeadOptions& options = {});

// Radial projection onto the closed ball.
Point project_to_ball(Point x, double radius);

}  // namespace corr
