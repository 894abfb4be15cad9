#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dualinspect/model.hpp"
#include "dualinspect/report.hpp"

namespace dualinspect {

/// Per-item counts with joint detections recorded; at least two items.
class FullCountSample {
 public:
  explicit FullCountSample(std::vector<LatentTriple> items);

  std::size_t size() const { return items_.size(); }
  std::span<const LatentTriple> items() const { return items_; }

 private:
  std::vector<LatentTriple> items_;
};

struct CrEstimate {
  double lambda_hat = 0.0;
  double p1_hat = 0.0;
  double p2_hat = 0.0;
  double x_bar_1 = 0.0;
  double x_bar_2 = 0.0;
  double y_bar = 0.0;
  std::size_t m = 0;
};

/// p1 = y / (x2 + y), p2 = y / (x1 + y), lambda = (x1 + y)(x2 + y) / y on
/// the item means. Only the three means are used. UndefinedEstimator when
/// no joint detection was recorded.
CrEstimate estimate_cr(const FullCountSample& sample);

ParamValues cr_asymptotic_expectation(const ModelParams& params, std::size_t m);
ParamValues cr_asymptotic_variance(const ModelParams& params, std::size_t m);

/// Plug-in asymptotic intervals from the variance formulas above.
EstimateReport cr_confidence_intervals(const CrEstimate& est, double alpha);

}  // namespace dualinspect
