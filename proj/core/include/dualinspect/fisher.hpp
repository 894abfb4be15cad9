#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

#include "dualinspect/mle.hpp"
#include "dualinspect/model.hpp"
#include "dualinspect/report.hpp"

namespace dualinspect {

inline constexpr double kDefaultFisherTailEps = 1e-12;

/// Per-item information in (lambda, p1, p2) order, summed over the count
/// grid r1 <= r1_max, r2 <= r2_max.
struct FisherMatrix {
  Eigen::Matrix3d entries = Eigen::Matrix3d::Zero();
  std::uint64_t r1_max = 0;
  std::uint64_t r2_max = 0;
  std::uint64_t truncation_r_max = 0;
  double captured_mass = 0.0;
};

/// -E[Hessian of ln P(r1, r2)] with the Hessian of each grid point taken by
/// central second differences of log_pmf (steps h_lambda = 1e-4 lambda,
/// h_p = min(1e-4, 0.1 min(p, 1 - p)), one Richardson level).
///
/// Each grid bound is the Poisson(lambda p_i) 1 - tail_eps quantile plus a
/// fixed buffer of 10. Throws Truncation when the grid holds less than
/// 1 - 100 tail_eps of the probability mass.
FisherMatrix fisher_information(const ModelParams& params, double tail_eps = kDefaultFisherTailEps);

/// E[score score^T] over the same grid with central-difference scores. An
/// independent route to the same matrix, used to cross-check the Hessian.
FisherMatrix fisher_information_outer_product(const ModelParams& params,
                                              double tail_eps = kDefaultFisherTailEps);

/// Diagonal of I^{-1} via a Cholesky solve; Singular if not positive definite.
ParamValues inverse_information_diagonal(const FisherMatrix& fisher);

/// Asymptotic variances [I^{-1}]_ii / M of the likelihood estimators.
ParamValues mle_asymptotic_variance(const FisherMatrix& fisher, std::size_t m);

/// estimate +/- z sqrt([I^{-1}]_ii / M), fisher taken at the estimate.
EstimateReport mle_confidence_intervals(const MleEstimate& est, const FisherMatrix& fisher,
                                        std::size_t m, double alpha);

}  // namespace dualinspect
