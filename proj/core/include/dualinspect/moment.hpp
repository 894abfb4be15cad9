#pragma once

#include <cstddef>

#include "dualinspect/model.hpp"
#include "dualinspect/report.hpp"

namespace dualinspect {

struct SummaryStats {
  double r_bar_1 = 0.0;
  double r_bar_2 = 0.0;
  /// Cross-covariance with divisor M - 1.
  double s12 = 0.0;
  std::size_t m = 0;
};

/// Two-pass: means first, then the sum of products of deviations.
SummaryStats summarize(const CountSample& sample);

struct MomentEstimate {
  double lambda_hat = 0.0;
  double p1_hat = 0.0;
  double p2_hat = 0.0;
  SummaryStats stats;
  bool p1_out_of_range = false;
  bool p2_out_of_range = false;

  bool flagged() const { return p1_out_of_range || p2_out_of_range; }
};

/// p1 = s12 / r_bar_2, p2 = s12 / r_bar_1, lambda = r_bar_1 r_bar_2 / s12.
///
/// Detection rates above 1 are reported as computed and flagged, never
/// clamped. Throws UndefinedEstimator when a mean count is zero and
/// CovarianceNonpositive when s12 <= 0.
MomentEstimate estimate_moment(const CountSample& sample);
MomentEstimate estimate_moment(const SummaryStats& stats);

/// Leading-order expectations of the moment estimators for M items.
ParamValues moment_asymptotic_expectation(const ModelParams& params, std::size_t m);

/// Leading-order variances of the moment estimators for M items.
ParamValues moment_asymptotic_variance(const ModelParams& params, std::size_t m);

/// Plug-in standard errors from the asymptotic variances and symmetric
/// normal intervals. Refuses flagged estimates (InvalidInput).
EstimateReport moment_confidence_intervals(const MomentEstimate& est, double alpha);

}  // namespace dualinspect
