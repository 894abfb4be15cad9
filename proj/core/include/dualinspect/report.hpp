#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dualinspect {

enum class Method { Moment, Mle, CaptureRecapture };

std::string_view to_string(Method method);

/// One value per model parameter, in (lambda, p1, p2) order.
struct ParamValues {
  double lambda = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct SolverInfo {
  int iterations = 0;
  /// First-order conditions d LL / d(lambda, p1, p2) at the solution.
  std::array<double, 3> residuals{};
};

struct EstimateReport {
  Method method = Method::Moment;
  std::size_t m = 0;
  double alpha = 0.05;
  double z = 0.0;
  ParamValues estimate;
  ParamValues standard_error;
  Interval ci_lambda;
  Interval ci_p1;
  Interval ci_p2;
  std::vector<std::string> flags;
  std::string interval_kind = "asymptotic";
  std::optional<SolverInfo> solver;
};

/// Symmetric normal-approximation intervals estimate +/- z * se with
/// z = Phi^{-1}(1 - alpha/2).
EstimateReport make_interval_report(Method method, std::size_t m, double alpha,
                                    const ParamValues& estimate, const ParamValues& standard_error);

}  // namespace dualinspect
