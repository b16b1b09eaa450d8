#pragma once

#include <cstdint>
#include <vector>

#include "corr/types.hpp"

namespace corr {

/// Weighted least-absolute-deviations program
///
///   minimise   sum_i w_i |a_i . x - b_i|
///   subject to E x = e,  lower <= x <= upper
///
/// with T residual rows a_i and p unknowns. Bounds may be infinite.
struct LadProblem {
  Eigen::MatrixXd design;        // T x p, rows a_i (column-major for the long products)
  Eigen::VectorXd target;        // b, length T
  Eigen::VectorXd weights;       // w > 0, length T
  Eigen::MatrixXd eq_matrix;     // k x p
  Eigen::VectorXd eq_rhs;        // length k
  Eigen::VectorXd lower;         // length p
  Eigen::VectorXd upper;         // length p

  Eigen::Index rows() const { return design.rows(); }
  Eigen::Index unknowns() const { return design.cols(); }
};

struct LadOptions {
  // 0 selects 1000 + 20 * (T + p).
  std::int64_t max_iterations = 0;
  // Residuals below zero_tol * (1 + |b_i|) count as interpolated. With 0 only
  // basic rows do; a positive value can cycle on exactly representable data.
  double zero_tol = 0.0;
  // Minimum directional decrease, relative to sum(w), for a pivot.
  double opt_tol = 1e-13;
  // Consecutive zero-length steps before switching to the lowest-index rule.
  int degenerate_limit = 25;
};

enum class LadStatus { optimal, iteration_cap };

// The p active rows that define a vertex. Right-hand sides are re-read from
// the problem when a basis is reused, except for free rows.
struct LadBasis {
  enum class Kind { equality, residual, lower, upper, free };
  struct Row {
    Kind kind;
    Eigen::Index index;  // equality row, residual row or coordinate
    double value;        // right-hand side
  };
  std::vector<Row> rows;
};

struct LadSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  LadStatus status = LadStatus::optimal;
  std::int64_t iterations = 0;
  bool warm_started = false;
  LadBasis basis;  // vertex of the returned x
};

double lad_objective(const LadProblem& problem, const Eigen::VectorXd& x);

/// Vertex-to-vertex descent on the piecewise-linear objective.
///
/// A vertex is fixed by p independent active rows drawn from the equality
/// rows, interpolated residuals (a_i . x = b_i), active bounds, and "free"
/// rows that pin a coordinate at its starting value. Each pivot releases one
/// active row along the edge with the best normalised directional derivative
/// and performs an exact line search over the residual breakpoints (weighted
/// selection, linear expected time), stopping at the breakpoint where the
/// slope turns non-negative or at the first bound hit. This is the simplex
/// method on the LP formulation with slack pairs kept implicit.
///
/// `start` must satisfy the equality rows and the bounds. When `warm` is
/// given and its vertex (re-solved against this problem's right-hand sides)
/// satisfies the bounds, the descent starts there instead; neighbouring
/// programs that differ only in e typically need a handful of pivots.
LadSolution solve_lad(const LadProblem& problem, const Eigen::VectorXd& start,
                      const LadOptions& options = {}, const LadBasis* warm = nullptr);

}  // namespace corr
