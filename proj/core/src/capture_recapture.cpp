#include "dualinspect/capture_recapture.hpp"

#include <cmath>
#include <string>

#include "dualinspect/errors.hpp"

namespace dualinspect {

FullCountSample::FullCountSample(std::vector<LatentTriple> items) : items_(std::move(items)) {
  if (items_.size() < 2) {
    throw Error(ErrorKind::SampleSize,
                "a sample needs at least 2 items, got " + std::to_string(items_.size()));
  }
}

CrEstimate estimate_cr(const FullCountSample& sample) {
  double sx1 = 0.0;
  double sx2 = 0.0;
  double sy = 0.0;
  for (const auto& t : sample.items()) {
    sx1 += t.x1;
    sx2 += t.x2;
    sy += t.y;
  }
  const double m = static_cast<double>(sample.size());
  CrEstimate est;
  est.m = sample.size();
  est.x_bar_1 = sx1 / m;
  est.x_bar_2 = sx2 / m;
  est.y_bar = sy / m;
  if (est.y_bar == 0.0) {
    throw Error(ErrorKind::UndefinedEstimator, "undefined estimator: no joint detections (ȳ=0)");
  }
  const double seen1 = est.x_bar_1 + est.y_bar;
  const double seen2 = est.x_bar_2 + est.y_bar;
  est.p1_hat = est.y_bar / seen2;
  est.p2_hat = est.y_bar / seen1;
  est.lambda_hat = seen1 * seen2 / est.y_bar;
  return est;
}

namespace {

void require_detection_domain(const ModelParams& params, std::size_t m) {
  if (params.p1() <= 0.0 || params.p2() <= 0.0) {
    throw Error(ErrorKind::Domain, "capture-recapture moments need p1, p2 in (0,1]");
  }
  if (m < 2) throw Error(ErrorKind::SampleSize, "capture-recapture moments need M >= 2");
}

}  // namespace

ParamValues cr_asymptotic_expectation(const ModelParams& params, std::size_t m) {
  require_detection_domain(params, m);
  const double miss = (1.0 / params.p1() - 1.0) * (1.0 / params.p2() - 1.0);
  return {params.lambda() + miss / static_cast<double>(m), params.p1(), params.p2()};
}

ParamValues cr_asymptotic_variance(const ModelParams& params, std::size_t m) {
  require_detection_domain(params, m);
  const double lambda = params.lambda();
  const double p1 = params.p1();
  const double p2 = params.p2();
  const double mm = static_cast<double>(m);
  const auto v_p = [&](double p) { return p * p * (1.0 - p) / (lambda * p1 * p2 * mm); };
  const double miss = (1.0 / p1 - 1.0) * (1.0 / p2 - 1.0);
  return {lambda * (1.0 + miss) / mm, v_p(p1), v_p(p2)};
}

EstimateReport cr_confidence_intervals(const CrEstimate& est, double alpha) {
  const ParamValues v = cr_asymptotic_variance(ModelParams(est.lambda_hat, est.p1_hat, est.p2_hat), est.m);
  EstimateReport report =
      make_interval_report(Method::CaptureRecapture, est.m, alpha, {est.lambda_hat, est.p1_hat, est.p2_hat},
                           {std::sqrt(v.lambda), std::sqrt(v.p1), std::sqrt(v.p2)});
  report.interval_kind = "plug-in asymptotic";
  return report;
}

}  // namespace dualinspect
