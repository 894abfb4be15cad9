#include "dualinspect/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dualinspect/errors.hpp"
#include "dualinspect/numeric.hpp"

namespace dualinspect {

ModelParams::ModelParams(double lambda, double p1, double p2) : lambda_(lambda), p1_(p1), p2_(p2) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::Domain, "lambda must be positive and finite, got " + std::to_string(lambda));
  }
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw Error(ErrorKind::Domain, "detection probabilities must lie in [0,1], got p1=" +
                                       std::to_string(p1) + " p2=" + std::to_string(p2));
  }
}

CountSample::CountSample(std::vector<CountPair> items) : items_(std::move(items)) {
  if (items_.size() < 2) {
    throw Error(ErrorKind::SampleSize,
                "a sample needs at least 2 items, got " + std::to_string(items_.size()));
  }
}

double log_pmf(const ModelParams& params, CountPair pair) {
  const double t1 = params.theta1();
  const double t2 = params.theta2();
  const double t12 = params.theta12();
  const std::uint32_t lmax = std::min(pair.r1, pair.r2);
  LogSumExp acc;
  for (std::uint32_t l = 0; l <= lmax; ++l) {
    // ly + (lx1 + lx2): swapping the inspectors swaps the bracketed operands,
    // so the symmetric model evaluates bit-identically.
    acc.add(log_poisson_pmf(l, t12) +
            (log_poisson_pmf(pair.r1 - l, t1) + log_poisson_pmf(pair.r2 - l, t2)));
  }
  return acc.value();
}

double pmf(const ModelParams& params, CountPair pair) { return std::exp(log_pmf(params, pair)); }

std::vector<LatentTriple> sample_full(const ModelParams& params, std::size_t m, RngSeed seed) {
  if (m < 2) {
    throw Error(ErrorKind::SampleSize, "a sample needs at least 2 items, got " + std::to_string(m));
  }
  const double t1 = params.theta1();
  const double t2 = params.theta2();
  const double t12 = params.theta12();
  std::vector<LatentTriple> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    SplitMix64 gen(derive_seed(seed, i));
    out[i].x1 = static_cast<std::uint32_t>(sample_poisson(gen, t1));
    out[i].x2 = static_cast<std::uint32_t>(sample_poisson(gen, t2));
    out[i].y = static_cast<std::uint32_t>(sample_poisson(gen, t12));
  }
  return out;
}

CountSample collapse(std::span<const LatentTriple> triples) {
  std::vector<CountPair> pairs;
  pairs.reserve(triples.size());
  for (const auto& t : triples) pairs.push_back(t.collapse());
  return CountSample(std::move(pairs));
}

CountSample sample_counts(const ModelParams& params, std::size_t m, RngSeed seed) {
  return collapse(sample_full(params, m, seed));
}

}  // namespace dualinspect
