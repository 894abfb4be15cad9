#include "dualinspect/report.hpp"

#include <string>

#include "dualinspect/errors.hpp"
#include "dualinspect/numeric.hpp"

namespace dualinspect {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Moment: return "moment";
    case Method::Mle: return "mle";
    case Method::CaptureRecapture: return "cr";
  }
  return "unknown";
}

EstimateReport make_interval_report(Method method, std::size_t m, double alpha,
                                    const ParamValues& estimate, const ParamValues& standard_error) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::Domain, "alpha must lie in (0,1), got " + std::to_string(alpha));
  }
  EstimateReport report;
  report.method = method;
  report.m = m;
  report.alpha = alpha;
  report.z = normal_quantile(1.0 - alpha / 2.0);
  report.estimate = estimate;
  report.standard_error = standard_error;
  const auto interval = [z = report.z](double est, double se) {
    return Interval{est - z * se, est + z * se};
  };
  report.ci_lambda = interval(estimate.lambda, standard_error.lambda);
  report.ci_p1 = interval(estimate.p1, standard_error.p1);
  report.ci_p2 = interval(estimate.p2, standard_error.p2);
  return report;
}

}  // namespace dualinspect
