#include "dualinspect/moment.hpp"

#include <cmath>
#include <string>

#include "dualinspect/errors.hpp"

namespace dualinspect {

namespace {

void require_detection_domain(const ModelParams& params, std::size_t m) {
  if (params.p1() <= 0.0 || params.p2() <= 0.0) {
    throw Error(ErrorKind::Domain, "asymptotic moments need p1, p2 in (0,1]");
  }
  if (m < 2) {
    throw Error(ErrorKind::SampleSize, "asymptotic moments need M >= 2");
  }
}

}  // namespace

SummaryStats summarize(const CountSample& sample) {
  const auto items = sample.items();
  const double m = static_cast<double>(items.size());
  double sum1 = 0.0;
  double sum2 = 0.0;
  for (const auto& item : items) {
    sum1 += item.r1;
    sum2 += item.r2;
  }
  SummaryStats stats;
  stats.m = items.size();
  stats.r_bar_1 = sum1 / m;
  stats.r_bar_2 = sum2 / m;
  double cross = 0.0;
  for (const auto& item : items) {
    cross += (item.r1 - stats.r_bar_1) * (item.r2 - stats.r_bar_2);
  }
  stats.s12 = cross / (m - 1.0);
  return stats;
}

MomentEstimate estimate_moment(const SummaryStats& stats) {
  if (stats.r_bar_2 == 0.0) {
    throw Error(ErrorKind::UndefinedEstimator, "undefined estimator: r̄₂=0");
  }
  if (stats.r_bar_1 == 0.0) {
    throw Error(ErrorKind::UndefinedEstimator, "undefined estimator: r̄₁=0");
  }
  if (!(stats.s12 > 0.0)) {
    throw Error(ErrorKind::CovarianceNonpositive,
                "sample covariance is not positive (s12=" + std::to_string(stats.s12) +
                    "); the data contradicts the model at this sample size");
  }
  MomentEstimate est;
  est.stats = stats;
  est.p1_hat = stats.s12 / stats.r_bar_2;
  est.p2_hat = stats.s12 / stats.r_bar_1;
  est.lambda_hat = stats.r_bar_1 * stats.r_bar_2 / stats.s12;
  est.p1_out_of_range = !(est.p1_hat >= 0.0 && est.p1_hat <= 1.0);
  est.p2_out_of_range = !(est.p2_hat >= 0.0 && est.p2_hat <= 1.0);
  return est;
}

MomentEstimate estimate_moment(const CountSample& sample) { return estimate_moment(summarize(sample)); }

ParamValues moment_asymptotic_expectation(const ModelParams& params, std::size_t m) {
  require_detection_domain(params, m);
  const double lambda = params.lambda();
  const double p1 = params.p1();
  const double p2 = params.p2();
  const double bias =
      ((lambda + 1.0) * (1.0 + 1.0 / (p1 * p2)) - 1.0 / p1 - 1.0 / p2) / static_cast<double>(m);
  return {lambda + bias, p1, p2};
}

ParamValues moment_asymptotic_variance(const ModelParams& params, std::size_t m) {
  require_detection_domain(params, m);
  const double lambda = params.lambda();
  const double p1 = params.p1();
  const double p2 = params.p2();
  const double inv_m = 1.0 / static_cast<double>(m);
  const double p12 = p1 * p2;
  const auto v_p = [&](double p) { return (p * p / p12) * (1.0 + p12 + (1.0 - p) / lambda) * inv_m; };
  const double v_lambda =
      lambda * (lambda * (1.0 / p12 + 1.0) + (1.0 / p1 - 1.0) * (1.0 / p2 - 1.0) + 1.0) * inv_m;
  return {v_lambda, v_p(p1), v_p(p2)};
}

EstimateReport moment_confidence_intervals(const MomentEstimate& est, double alpha) {
  if (est.flagged()) {
    throw Error(ErrorKind::InvalidInput,
                "confidence intervals need detection-rate estimates inside (0,1]");
  }
  if (!(est.lambda_hat > 0.0) || !(est.p1_hat > 0.0) || !(est.p2_hat > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "confidence intervals need positive estimates");
  }
  const ParamValues v = moment_asymptotic_variance(
      ModelParams(est.lambda_hat, est.p1_hat, est.p2_hat), est.stats.m);
  return make_interval_report(Method::Moment, est.stats.m, alpha,
                              {est.lambda_hat, est.p1_hat, est.p2_hat},
                              {std::sqrt(v.lambda), std::sqrt(v.p1), std::sqrt(v.p2)});
}

}  // namespace dualinspect
