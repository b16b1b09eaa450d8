#include "corr/envelope_regression.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace corr {

namespace {

constexpr double kClampTolerance = 1e-12;

void write_row(std::ostream& out, std::string_view tag, const Eigen::VectorXd& row, double rhs,
               bool with_rhs) {
  out << tag;
  for (Eigen::Index j = 0; j < row.size(); ++j) out << fmt::format(" {:.17g}", row[j]);
  if (with_rhs) out << fmt::format(" {:.17g}", rhs);
  out << '\n';
}

}  // namespace

std::string_view to_string(FitStatus status) {
  switch (status) {
    case FitStatus::optimal:
      return "optimal";
    case FitStatus::iteration_cap:
      return "iteration_cap";
    case FitStatus::infeasible_numeric:
      return "infeasible_numeric";
  }
  return "unknown";
}

EnvelopeRegression::EnvelopeRegression(const SampleSet& fit_set, const SampleSet& mean_set)
    : dim_(fit_set.dim()) {
  if (fit_set.size() < 1 || mean_set.size() < 1) {
    throw std::invalid_argument("both sample sets need at least one point");
  }
  if (mean_set.dim() != dim_) throw std::invalid_argument("sample sets differ in dimension");
  const Eigen::Index n = dim_;
  const Eigen::Index p = 2 * n + 1;
  const Eigen::Index T = fit_set.size();

  problem_.design.resize(T, p);
  problem_.design.leftCols(n) = fit_set.points.cwiseAbs2();
  problem_.design.middleCols(n, n) = fit_set.points;
  problem_.design.col(2 * n).setOnes();
  problem_.target = fit_set.values;
  problem_.weights = Eigen::VectorXd::Constant(T, 1.0 / static_cast<double>(T));

  mean_features_.resize(p);
  mean_features_.head(n) = mean_set.points.cwiseAbs2().colwise().mean().transpose();
  mean_features_.segment(n, n) = mean_set.points.colwise().mean().transpose();
  mean_features_[2 * n] = 1.0;
  problem_.eq_matrix = mean_features_.transpose();
  problem_.eq_rhs = Eigen::VectorXd::Zero(1);
}

LadProblem EnvelopeRegression::program(double mu, double box_bound) const {
  const Eigen::Index n = dim_;
  LadProblem pb = problem_;
  pb.eq_rhs[0] = mu;
  pb.lower = Eigen::VectorXd::Constant(2 * n + 1, -box_bound);
  pb.lower.head(n).setZero();
  pb.upper = Eigen::VectorXd::Constant(2 * n + 1, box_bound);
  return pb;
}

FitResult EnvelopeRegression::fit(double mu, double box_bound, double lp_tol,
                                  const LadBasis* warm) const {
  if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
  if (!(box_bound > 0.0)) throw std::invalid_argument("box_bound must be positive");
  const Eigen::Index n = dim_;
  const Eigen::Index p = 2 * n + 1;

  FitResult result;
  // theta = (0, 0, mu) is the only candidate start; it is feasible iff |mu| <= box.
  if (std::abs(mu) > box_bound) {
    result.theta = QuadSurrogate::zero(dim_);
    result.theta.theta3 = std::copysign(box_bound, mu);
    result.objective = (problem_.target.array() - result.theta.theta3).abs().mean();
    result.status = FitStatus::infeasible_numeric;
    return result;
  }

  const LadProblem pb = program(mu, box_bound);
  Eigen::VectorXd start = Eigen::VectorXd::Zero(p);
  start[2 * n] = mu;
  LadSolution sol = solve_lad(pb, start, {}, warm);

  Eigen::VectorXd theta = sol.x;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (theta[i] < 0.0) {
      if (theta[i] < -kClampTolerance) {
        throw std::logic_error("solver returned theta1 below zero beyond tolerance");
      }
      theta[i] = 0.0;
      ++result.clamped;
    }
  }
  result.theta = QuadSurrogate::from_flat(theta);
  result.objective = lad_objective(pb, theta);
  result.iterations = sol.iterations;
  result.basis = std::move(sol.basis);
  result.status = sol.status == LadStatus::optimal ? FitStatus::optimal : FitStatus::iteration_cap;

  const double residual = std::abs(mean_features_.dot(theta) - mu);
  if (residual > lp_tol) result.status = FitStatus::infeasible_numeric;
  return result;
}

FitResult fit_envelope(const FitProblem& problem) {
  EnvelopeRegression regression(problem.fit_set, problem.mean_set);
  return regression.fit(problem.mu, problem.box_bound, problem.lp_tol);
}

void write_lp_text(std::ostream& out, const FitProblem& problem) {
  const EnvelopeRegression regression(problem.fit_set, problem.mean_set);
  const LadProblem pb = regression.program(problem.mu, problem.box_bound);
  const Eigen::Index p = pb.unknowns();
  const Eigen::Index T = pb.rows();
  const Eigen::Index m = p + T;

  out << "corr-lp 1\n";
  out << "variables " << m << '\n';
  Eigen::VectorXd c = Eigen::VectorXd::Zero(m);
  c.tail(T) = pb.weights;
  write_row(out, "objective", c, 0.0, false);
  for (Eigen::Index i = 0; i < T; ++i) {
    // h - f <= s  and  f - h <= s
    Eigen::VectorXd row = Eigen::VectorXd::Zero(m);
    row.head(p) = pb.design.row(i).transpose();
    row[p + i] = -1.0;
    write_row(out, "le", row, pb.target[i], true);
    row.head(p) = -row.head(p);
    write_row(out, "le", row, -pb.target[i], true);
  }
  Eigen::VectorXd eq = Eigen::VectorXd::Zero(m);
  eq.head(p) = pb.eq_matrix.row(0).transpose();
  write_row(out, "eq", eq, pb.eq_rhs[0], true);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double lo = j < p ? pb.lower[j] : 0.0;
    const double hi = j < p ? pb.upper[j] : std::numeric_limits<double>::infinity();
    out << fmt::format("bounds {:.17g} {:.17g}\n", lo, hi);
  }
}

}  // namespace corr
