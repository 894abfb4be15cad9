#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "dualinspect/model.hpp"
#include "dualinspect/report.hpp"

namespace dualinspect {

/// Sample plus everything the likelihood needs that does not depend on the
/// parameters. Items with equal counts share one coefficient table
/// ln c_l = ln[C(r1,l) C(r2,l) l!], l = 0..min(r1,r2).
class LikelihoodContext {
 public:
  struct PairGroup {
    CountPair pair;
    std::size_t count = 0;
    std::vector<double> log_coefficients;
  };

  explicit LikelihoodContext(CountSample sample);

  const CountSample& sample() const { return sample_; }
  std::size_t size() const { return sample_.size(); }
  double r_bar_1() const { return r_bar_1_; }
  double r_bar_2() const { return r_bar_2_; }
  /// (1/M) sum ln(r1! r2!)
  double mean_log_factorials() const { return mean_log_factorials_; }

  std::span<const PairGroup> groups() const { return groups_; }
  std::span<const double> log_coefficients(std::size_t item) const {
    return groups_[group_of_item_[item]].log_coefficients;
  }

 private:
  CountSample sample_;
  std::vector<PairGroup> groups_;
  std::vector<std::size_t> group_of_item_;
  double r_bar_1_ = 0.0;
  double r_bar_2_ = 0.0;
  double mean_log_factorials_ = 0.0;
};

/// Psi(z) = (1/M) sum_m ln sum_l c_{m,l} z^{-l}; z > 0.
double psi(double z, const LikelihoodContext& ctx);

/// Psi'(z); never positive.
double psi_prime(double z, const LikelihoodContext& ctx);

/// Per-item average log-likelihood; needs interior detection rates.
double log_likelihood(const ModelParams& params, const LikelihoodContext& ctx);

/// Analytic d LL / d(lambda, p1, p2).
ParamValues log_likelihood_gradient(const ModelParams& params, const LikelihoodContext& ctx);

/// g(lambda) = -(lambda/r1 - 1)(lambda/r2 - 1) Psi'((1 - r1/lambda)(1 - r2/lambda) lambda) - 1
/// with r_i the mean counts. Its roots above max(r1, r2) are the
/// stationary points of the likelihood once p_i = r_i / lambda.
double mle_scalar_residual(double lambda, const LikelihoodContext& ctx);

struct SolverOptions {
  double rel_tol = 1e-12;
  int max_doublings = 60;
  int max_iterations = 200;
  /// Offset of the lowest probed lambda above max(r1, r2), relative.
  double lower_offset = 1e-9;
};

struct MleEstimate {
  double lambda_star = 0.0;
  double p1_star = 0.0;
  double p2_star = 0.0;
  std::array<double, 3> residuals{};
  double scalar_residual = 0.0;
  int solver_iterations = 0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  std::size_t m = 0;
};

/// Solves g(lambda) = 0, then p_i = r_i / lambda.
///
/// The bracket search starts at the moment estimate when it is defined and
/// above the lower bound, else at 2 max(r1, r2), and doubles the distance
/// (towards the lower bound, or upwards) at most max_doublings times.
/// Throws UndefinedEstimator if a mean count is zero and
/// NoInteriorMaximumError if no sign change is found.
MleEstimate solve_mle(const LikelihoodContext& ctx, const SolverOptions& options = {});
MleEstimate solve_mle(const CountSample& sample, const SolverOptions& options = {});

}  // namespace dualinspect
