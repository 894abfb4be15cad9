#include "dualinspect/rng.hpp"

#include <cmath>

#include "dualinspect/numeric.hpp"

namespace dualinspect {

namespace {

constexpr double kInversionMaxMean = 30.0;

std::uint64_t poisson_inversion(SplitMix64& gen, double mean) {
  const double u = gen.uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u > cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    if (p == 0.0) break;  // u sits above the representable cdf
    cdf += p;
  }
  return k;
}

std::uint64_t poisson_ptrs(SplitMix64& gen, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = gen.uniform() - 0.5;
    const double v = gen.uniform();
    const double us = 0.5 - std::abs(u);
    if (us <= 0.0) continue;
    const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) {
      if (kd >= 0.0) return static_cast<std::uint64_t>(kd);
      continue;
    }
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    const auto k = static_cast<std::uint64_t>(kd);
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + kd * loglam - log_factorial(k)) {
      return k;
    }
  }
}

}  // namespace

std::uint64_t sample_poisson(SplitMix64& gen, double mean) {
  if (mean <= 0.0) return 0;
  return mean <= kInversionMaxMean ? poisson_inversion(gen, mean) : poisson_ptrs(gen, mean);
}

}  // namespace dualinspect
