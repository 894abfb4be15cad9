#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dualinspect/rng.hpp"

namespace dualinspect {

/// Defect rate and the two detection probabilities. Construction validates
/// lambda > 0 and p1, p2 in [0, 1]; estimators that need interior values
/// check that themselves.
class ModelParams {
 public:
  ModelParams(double lambda, double p1, double p2);

  double lambda() const { return lambda_; }
  double p1() const { return p1_; }
  double p2() const { return p2_; }

  /// Rate of defects seen only by inspector 1.
  double theta1() const { return lambda_ * (p1_ * (1.0 - p2_)); }
  /// Rate of defects seen only by inspector 2.
  double theta2() const { return lambda_ * (p2_ * (1.0 - p1_)); }
  /// Rate of jointly detected defects.
  double theta12() const { return lambda_ * (p1_ * p2_); }

  bool interior() const { return p1_ > 0.0 && p1_ < 1.0 && p2_ > 0.0 && p2_ < 1.0; }

  /// Same model with the inspectors relabelled.
  ModelParams swapped() const { return ModelParams(lambda_, p2_, p1_); }

 private:
  double lambda_;
  double p1_;
  double p2_;
};

struct CountPair {
  std::uint32_t r1 = 0;
  std::uint32_t r2 = 0;

  friend bool operator==(const CountPair&, const CountPair&) = default;
};

/// Observed per-item counts of the two inspectors; at least two items.
class CountSample {
 public:
  explicit CountSample(std::vector<CountPair> items);

  std::size_t size() const { return items_.size(); }
  std::span<const CountPair> items() const { return items_; }
  const CountPair& operator[](std::size_t i) const { return items_[i]; }

  friend bool operator==(const CountSample&, const CountSample&) = default;

 private:
  std::vector<CountPair> items_;
};

/// Defects found only by inspector 1, only by inspector 2, and by both.
struct LatentTriple {
  std::uint32_t x1 = 0;
  std::uint32_t x2 = 0;
  std::uint32_t y = 0;

  CountPair collapse() const { return CountPair{x1 + y, x2 + y}; }

  friend bool operator==(const LatentTriple&, const LatentTriple&) = default;
};

/// ln P(R1 = r1, R2 = r2) as a convolution of the three independent Poisson
/// components, accumulated with log-sum-exp. Finite for boundary p.
double log_pmf(const ModelParams& params, CountPair pair);

double pmf(const ModelParams& params, CountPair pair);

/// Item i draws X1, X2, Y (in that order) from its own stream
/// derive_seed(seed, i).
std::vector<LatentTriple> sample_full(const ModelParams& params, std::size_t m, RngSeed seed);

/// Observed counts of sample_full with the same seed.
CountSample sample_counts(const ModelParams& params, std::size_t m, RngSeed seed);

CountSample collapse(std::span<const LatentTriple> triples);

}  // namespace dualinspect
