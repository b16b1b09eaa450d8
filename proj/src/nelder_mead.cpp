#include "corr/nelder_mead.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace corr {

Point project_to_ball(Point x, double radius) {
  const double norm = x.norm();
  if (norm > radius) x *= radius / norm;
  return x;
}

namespace {

class BudgetedObjective {
 public:
  BudgetedObjective(const std::function<double(const Point&)>& f, std::int64_t budget)
      : f_(f), budget_(budget) {}

  bool exhausted() const { return used_ >= budget_; }
  std::int64_t used() const { return used_; }

  double operator()(const Point& x) {
    ++used_;
    const double value = f_(x);
    if (value < best_f_) {
      best_f_ = value;
      best_x_ = x;
    }
    return value;
  }

  void seed(const Point& x, double value) {
    best_f_ = value;
    best_x_ = x;
  }

  double best_f() const { return best_f_; }
  const Point& best_x() const { return best_x_; }

 private:
  const std::function<double(const Point&)>& f_;
  std::int64_t budget_;
  std::int64_t used_ = 0;
  double best_f_ = std::numeric_limits<double>::infinity();
  Point best_x_;
};

struct Vertex {
  Point x;
  double f;
};

// One Nelder-Mead run from `start`; returns false if the budget ran out.
bool run_simplex(BudgetedObjective& eval, const Point& start, double start_f, double step,
                 double radius, double x_tol) {
  const Eigen::Index n = start.size();
  std::vector<Vertex> simplex;
  simplex.push_back({start, start_f});
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eval.exhausted()) return false;
    Point v = start;
    v[i] += step;
    v = project_to_ball(v, radius);
    if ((v - start).norm() < 0.5 * step) {
      v = start;
      v[i] -= step;
      v = project_to_ball(v, radius);
    }
    simplex.push_back({v, eval(v)});
  }

  const auto order = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  while (true) {
    std::stable_sort(simplex.begin(), simplex.end(), order);
    double diameter = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      diameter = std::max(diameter, (simplex[i].x - simplex[0].x).lpNorm<Eigen::Infinity>());
    }
    if (diameter <= x_tol) return true;
    if (eval.exhausted()) return false;

    Point centroid = Point::Zero(n);
    for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i].x;
    centroid /= static_cast<double>(n);
    Vertex& worst = simplex.back();
    const double f_best = simplex.front().f;
    const double f_second = simplex[simplex.size() - 2].f;

    const Point xr = project_to_ball(centroid + (centroid - worst.x), radius);
    const double fr = eval(xr);
    if (fr < f_best) {
      if (eval.exhausted()) {
        worst = {xr, fr};
        return false;
      }
      const Point xe = project_to_ball(centroid + 2.0 * (centroid - worst.x), radius);
      const double fe = eval(xe);
      worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
      continue;
    }
    if (fr < f_second) {
      worst = {xr, fr};
      continue;
    }
    if (eval.exhausted()) return false;
    const bool outside = fr < worst.f;
    const Point xc = outside ? project_to_ball(centroid + 0.5 * (xr - centroid), radius)
                             : project_to_ball(centroid + 0.5 * (worst.x - centroid), radius);
    const double fc = eval(xc);
    if (fc < std::min(fr, worst.f) || (outside && fc <= fr)) {
      worst = {xc, fc};
      continue;
    }
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      if (eval.exhausted()) return false;
      simplex[i].x = simplex[0].x + 0.5 * (simplex[i].x - simplex[0].x);
      simplex[i].f = eval(simplex[i].x);
    }
  }
}

}  // namespace

LocalSearchResult nelder_mead_minimize(const std::function<double(const Point&)>& objective,
                                       const Point& x0, std::optional<double> f0,
                                       std::int64_t budget, double radius,
                                       const NelderMeadOptions& options) {
  BudgetedObjective eval(objective, std::max<std::int64_t>(budget, 0));
  if (f0) {
    eval.seed(x0, *f0);
  } else {
    if (budget <= 0) {
      // Reported value only; nothing is charged against a zero budget.
      return {x0, objective(x0), 0};
    }
    eval(x0);
  }

  double step = options.initial_step;
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    const double before = eval.best_f();
    const Point start = eval.best_x();
    const bool converged = run_simplex(eval, start, before, step, radius, options.x_tol);
    if (!converged) break;
    if (restart > 0 && !(eval.best_f() < before)) break;
    step *= 0.1;
  }
  return {eval.best_x(), eval.best_f(), eval.used()};
}

}  // namespace corr
