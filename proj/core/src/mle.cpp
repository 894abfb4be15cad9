#include "dualinspect/mle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "dualinspect/errors.hpp"
#include "dualinspect/moment.hpp"
#include "dualinspect/numeric.hpp"
#include "dualinspect/roots.hpp"

namespace dualinspect {

LikelihoodContext::LikelihoodContext(CountSample sample) : sample_(std::move(sample)) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> index;
  group_of_item_.reserve(sample_.size());
  double sum1 = 0.0;
  double sum2 = 0.0;
  CompensatedSum log_facts;
  for (const auto& item : sample_.items()) {
    sum1 += item.r1;
    sum2 += item.r2;
    log_facts.add(log_factorial(item.r1) + log_factorial(item.r2));
    const auto [it, inserted] = index.try_emplace({item.r1, item.r2}, groups_.size());
    if (inserted) {
      PairGroup group;
      group.pair = item;
      const std::uint32_t lmax = std::min(item.r1, item.r2);
      group.log_coefficients.resize(lmax + 1);
      for (std::uint32_t l = 0; l <= lmax; ++l) {
        group.log_coefficients[l] =
            log_binomial(item.r1, l) + log_binomial(item.r2, l) + log_factorial(l);
      }
      groups_.push_back(std::move(group));
    }
    ++groups_[it->second].count;
    group_of_item_.push_back(it->second);
  }
  const double m = static_cast<double>(sample_.size());
  r_bar_1_ = sum1 / m;
  r_bar_2_ = sum2 / m;
  mean_log_factorials_ = log_facts.value() / m;
}

namespace {

void require_positive_argument(double z) {
  if (!(z > 0.0)) {
    throw Error(ErrorKind::Domain, "Psi is defined for z > 0 only, got " + std::to_string(z));
  }
}

// Largest exponent of the weights c_l z^{-l}, used as the log-sum-exp shift.
double max_log_weight(std::span<const double> log_coef, double log_z) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < log_coef.size(); ++l) {
    best = std::max(best, log_coef[l] - static_cast<double>(l) * log_z);
  }
  return best;
}

}  // namespace

double psi(double z, const LikelihoodContext& ctx) {
  require_positive_argument(z);
  const double log_z = std::log(z);
  CompensatedSum total;
  for (const auto& group : ctx.groups()) {
    const auto& coef = group.log_coefficients;
    const double shift = max_log_weight(coef, log_z);
    double s = 0.0;
    for (std::size_t l = 0; l < coef.size(); ++l) {
      s += std::exp(coef[l] - static_cast<double>(l) * log_z - shift);
    }
    total.add(static_cast<double>(group.count) * (shift + std::log(s)));
  }
  return total.value() / static_cast<double>(ctx.size());
}

double psi_prime(double z, const LikelihoodContext& ctx) {
  require_positive_argument(z);
  const double log_z = std::log(z);
  CompensatedSum total;
  for (const auto& group : ctx.groups()) {
    const auto& coef = group.log_coefficients;
    if (coef.size() == 1) continue;
    const double shift = max_log_weight(coef, log_z);
    double den = 0.0;
    double num = 0.0;
    for (std::size_t l = 0; l < coef.size(); ++l) {
      const double w = std::exp(coef[l] - static_cast<double>(l) * log_z - shift);
      den += w;
      num += static_cast<double>(l) * w;
    }
    total.add(static_cast<double>(group.count) * (num / den));
  }
  return -total.value() / (z * static_cast<double>(ctx.size()));
}

namespace {

void require_interior(const ModelParams& params) {
  if (!params.interior()) {
    throw Error(ErrorKind::Domain, "the likelihood needs detection rates strictly inside (0,1)");
  }
}

}  // namespace

double log_likelihood(const ModelParams& params, const LikelihoodContext& ctx) {
  require_interior(params);
  const double lambda = params.lambda();
  const double q1 = 1.0 - params.p1();
  const double q2 = 1.0 - params.p2();
  return -lambda * (1.0 - q1 * q2) + ctx.r_bar_1() * std::log(params.theta1()) +
         ctx.r_bar_2() * std::log(params.theta2()) - ctx.mean_log_factorials() +
         psi(q1 * q2 * lambda, ctx);
}

ParamValues log_likelihood_gradient(const ModelParams& params, const LikelihoodContext& ctx) {
  require_interior(params);
  const double lambda = params.lambda();
  const double p1 = params.p1();
  const double p2 = params.p2();
  const double q1 = 1.0 - p1;
  const double q2 = 1.0 - p2;
  const double r1 = ctx.r_bar_1();
  const double r2 = ctx.r_bar_2();
  const double dpsi = psi_prime(q1 * q2 * lambda, ctx);
  return {
      -(1.0 - q1 * q2) + r1 / lambda + r2 / lambda + q1 * q2 * dpsi,
      -lambda * q2 + r1 / p1 - r2 / q1 - q2 * lambda * dpsi,
      -lambda * q1 - r1 / q2 + r2 / p2 - q1 * lambda * dpsi,
  };
}

double mle_scalar_residual(double lambda, const LikelihoodContext& ctx) {
  const double r1 = ctx.r_bar_1();
  const double r2 = ctx.r_bar_2();
  if (r1 == 0.0 || r2 == 0.0) {
    throw Error(ErrorKind::Domain, "the scalar likelihood equation needs positive mean counts");
  }
  if (!(lambda > std::max(r1, r2))) {
    throw Error(ErrorKind::Domain, "the scalar likelihood equation needs lambda > max(r̄₁, r̄₂)");
  }
  const double z = (1.0 - r1 / lambda) * (1.0 - r2 / lambda) * lambda;
  return -(lambda / r1 - 1.0) * (lambda / r2 - 1.0) * psi_prime(z, ctx) - 1.0;
}

MleEstimate solve_mle(const LikelihoodContext& ctx, const SolverOptions& options) {
  const double r1 = ctx.r_bar_1();
  const double r2 = ctx.r_bar_2();
  if (r2 == 0.0) throw Error(ErrorKind::UndefinedEstimator, "undefined estimator: r̄₂=0");
  if (r1 == 0.0) throw Error(ErrorKind::UndefinedEstimator, "undefined estimator: r̄₁=0");

  const double floor = std::max(r1, r2);
  const double lower = floor * (1.0 + options.lower_offset);
  const auto g = [&ctx](double lambda) { return mle_scalar_residual(lambda, ctx); };

  double start = 2.0 * floor;
  const SummaryStats stats = summarize(ctx.sample());
  if (stats.s12 > 0.0) {
    const double lambda_hat = r1 * r2 / stats.s12;
    if (lambda_hat > lower) start = lambda_hat;
  }

  int evaluations = 1;
  const double g_start = g(start);
  double a = start;
  double b = start;
  double ga = g_start;
  double gb = g_start;
  bool bracketed = g_start == 0.0;
  if (g_start < 0.0) {
    // g tends to a negative limit at the lower bound; look upwards.
    for (int k = 1; k <= options.max_doublings && !bracketed; ++k) {
      const double x = std::ldexp(start, k);
      const double gx = g(x);
      ++evaluations;
      if (gx > 0.0) {
        b = x;
        gb = gx;
        bracketed = true;
      } else {
        a = x;
        ga = gx;
      }
    }
  } else if (g_start > 0.0) {
    for (int k = 1; k <= options.max_doublings && !bracketed; ++k) {
      const double x = lower + std::ldexp(start - lower, -k);
      const double gx = g(x);
      ++evaluations;
      if (gx < 0.0) {
        a = x;
        ga = gx;
        bracketed = true;
      } else {
        b = x;
        gb = gx;
      }
    }
  }
  if (!bracketed) {
    const double lo = g_start < 0.0 ? start : lower + std::ldexp(start - lower, -options.max_doublings);
    const double hi = g_start < 0.0 ? std::ldexp(start, options.max_doublings) : start;
    std::ostringstream msg;
    msg << "no interior maximum: the likelihood equation has no root in the scanned range [" << lo
        << ", " << hi << "]; the likelihood is maximized on the boundary of the parameter domain "
        << "(a detection rate of 1 or 0), which happens for small samples or detection rates near "
        << "the boundary";
    throw NoInteriorMaximumError(lo, hi, msg.str());
  }

  MleEstimate est;
  est.m = ctx.size();
  est.bracket_low = a;
  est.bracket_high = b;
  double root = start;
  double g_root = g_start;
  if (g_start != 0.0) {
    const RootResult rr = brent_root(g, a, b, ga, gb, options.rel_tol, options.max_iterations);
    evaluations += rr.iterations;
    root = rr.root;
    g_root = rr.value;
  }
  est.lambda_star = root;
  est.p1_star = r1 / root;
  est.p2_star = r2 / root;
  est.scalar_residual = g_root;
  est.solver_iterations = evaluations;
  const ParamValues grad =
      log_likelihood_gradient(ModelParams(root, est.p1_star, est.p2_star), ctx);
  est.residuals = {grad.lambda, grad.p1, grad.p2};
  // A sign change of g found next to the lower bound can be rounding noise
  // (g tends to 0 there for some samples); the full gradient tells them apart.
  const double scale = 1.0 + r1 + r2;
  for (double r : est.residuals) {
    if (!(std::abs(r) <= 1e-6 * scale)) {
      std::ostringstream msg;
      msg << "no interior maximum: the likelihood equation only vanishes at the domain boundary lambda = "
          << root << " (detection rate " << std::max(est.p1_star, est.p2_star)
          << "), where the full gradient is not zero";
      throw NoInteriorMaximumError(a, b, msg.str());
    }
  }
  return est;
}

MleEstimate solve_mle(const CountSample& sample, const SolverOptions& options) {
  return solve_mle(LikelihoodContext(sample), options);
}

}  // namespace dualinspect
