#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>

#include "corr/lad_solver.hpp"
#include "corr/sampler.hpp"
#include "corr/surrogate.hpp"

namespace corr {

struct FitProblem {
  const SampleSet& fit_set;   // residuals are measured here
  const SampleSet& mean_set;  // the mean constraint is measured here
  double mu = 0.0;
  double box_bound = 1e6;
  double lp_tol = 1e-8;
};

enum class FitStatus { optimal, iteration_cap, infeasible_numeric };

std::string_view to_string(FitStatus status);

struct FitResult {
  QuadSurrogate theta;
  double objective = 0.0;  // mean absolute residual over the fit set
  FitStatus status = FitStatus::optimal;
  std::int64_t iterations = 0;
  int clamped = 0;  // theta1 entries in [-1e-12, 0) reset to zero
  LadBasis basis;   // final vertex, reusable as a warm start for a nearby mu
};

/// Shape-constrained L1 fit of the quadratic basis to one pair of sample sets.
///
///   min_theta  mean_{x in fit set} |h(x; theta) - f(x)|
///   s.t.       mean_{x in mean set} h(x; theta) = mu
///              theta1 >= 0,  |theta| <= box_bound (elementwise)
///
/// The feature matrix and the mean feature row are built once, so repeated
/// fits over many mu values share them. Fits are independent and the object
/// is immutable after construction.
class EnvelopeRegression {
 public:
  EnvelopeRegression(const SampleSet& fit_set, const SampleSet& mean_set);

  FitResult fit(double mu, double box_bound = 1e6, double lp_tol = 1e-8,
                const LadBasis* warm = nullptr) const;

  int dim() const { return dim_; }
  Eigen::Index sample_count() const { return problem_.rows(); }
  // Mean feature vector over the mean set: the equality row.
  const Eigen::VectorXd& mean_features() const { return mean_features_; }
  // The underlying program for a given mu and box; used for exports and tests.
  LadProblem program(double mu, double box_bound) const;

 private:
  int dim_;
  LadProblem problem_;
  Eigen::VectorXd mean_features_;
};

FitResult fit_envelope(const FitProblem& problem);

/// Writes the standard-form linear program behind a fit as plain text.
///
/// Variables are theta (2n + 1 entries) followed by one slack s_i per fit
/// sample. Layout:
///
///   corr-lp 1
///   variables <p + T>
///   objective <c_1> ... <c_m>             (minimise)
///   le <a_1> ... <a_m> <rhs>              (2T rows, a . v <= rhs)
///   eq <a_1> ... <a_m> <rhs>              (1 row)
///   bounds <lo_j> <hi_j>                  (one row per variable)
void write_lp_text(std::ostream& out, const FitProblem& problem);

}  // namespace corr
