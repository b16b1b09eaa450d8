#include "corr/baselines.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "corr/nelder_mead.hpp"
#include "corr/sampler.hpp"

namespace corr {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::corr:
      return "corr";
    case Method::corr_hybrid:
      return "corr_hybrid";
    case Method::random_search:
      return "random_search";
    case Method::simulated_annealing:
      return "simulated_annealing";
    case Method::nelder_mead:
      return "nelder_mead";
  }
  return "unknown";
}

Method parse_method(std::string_view token) {
  for (Method m : {Method::corr, Method::corr_hybrid, Method::random_search,
                   Method::simulated_annealing, Method::nelder_mead}) {
    if (to_string(m) == token) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(token) + "'");
}

BaselineResult random_search(const Objective& fn, std::int64_t budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("random_search needs a budget >= 1");
  Rng rng(seed);
  BaselineResult out;
  out.method = Method::random_search;
  out.best_so_far.reserve(static_cast<std::size_t>(budget));
  for (std::int64_t k = 0; k < budget; ++k) {
    Point x = rng.ball_point(fn.dim(), fn.domain_radius());
    const double f = fn.evaluate(x);
    if (k == 0 || f < out.f_best) {
      out.f_best = f;
      out.x_best = std::move(x);
    }
    out.best_so_far.push_back(out.f_best);
  }
  out.eval_count = budget;
  return out;
}

BaselineResult simulated_annealing(const Objective& fn, std::int64_t budget,
                                   std::uint64_t seed, const AnnealingOptions& options) {
  if (budget < 1) throw std::invalid_argument("simulated_annealing needs a budget >= 1");
  if (!(options.cooling > 0.0 && options.cooling < 1.0)) {
    throw std::invalid_argument("cooling must lie in (0, 1)");
  }
  if (options.t0 < 0.0 || !(options.step_scale > 0.0)) {
    throw std::invalid_argument("t0 must be >= 0 and step_scale > 0");
  }
  Rng rng(seed);
  const double radius = fn.domain_radius();
  Point current = rng.ball_point(fn.dim(), radius);
  double f_current = fn.evaluate(current);

  BaselineResult out;
  out.method = Method::simulated_annealing;
  out.x_best = current;
  out.f_best = f_current;
  out.best_so_far.reserve(static_cast<std::size_t>(budget));
  out.best_so_far.push_back(f_current);

  double temperature = options.t0;
  for (std::int64_t k = 1; k < budget; ++k) {
    Point proposal = current;
    for (Eigen::Index i = 0; i < proposal.size(); ++i) proposal[i] += options.step_scale * rng.normal();
    proposal = project_to_ball(std::move(proposal), radius);
    const double f = fn.evaluate(proposal);
    const double delta = f - f_current;
    const double u = rng.uniform();
    bool accept = delta <= 0.0;
    if (!accept && temperature > 0.0) accept = u < std::exp(-delta / temperature);
    if (accept) {
      current = std::move(proposal);
      f_current = f;
      if (f_current < out.f_best) {
        out.f_best = f_current;
        out.x_best = current;
      }
    }
    out.best_so_far.push_back(out.f_best);
    temperature *= options.cooling;
  }
  out.eval_count = budget;
  return out;
}

BaselineResult nelder_mead(const Objective& fn, const Point& x0, std::int64_t budget) {
  const std::function<double(const Point&)> objective = [&fn](const Point& x) {
    return fn.evaluate(x);
  };
  const LocalSearchResult local =
      nelder_mead_minimize(objective, x0, std::nullopt, budget, fn.domain_radius());
  BaselineResult out;
  out.method = Method::nelder_mead;
  out.x_best = local.x;
  out.f_best = local.f;
  out.eval_count = local.evaluations;
  return out;
}

}  // namespace corr
