#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dualinspect {

inline constexpr std::size_t kDefaultLogFactorialCap = 1'000'000;

/// ln(n!) for n <= cap from a precomputed table, std::lgamma beyond it.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::size_t cap = kDefaultLogFactorialCap);

  double operator()(std::uint64_t n) const {
    return n < table_.size() ? table_[n] : std::lgamma(static_cast<double>(n) + 1.0);
  }

  std::size_t cap() const { return table_.size() - 1; }

 private:
  std::vector<double> table_;
};

/// Process-wide table with the default cap, built on first use.
const LogFactorialTable& default_log_factorials();

inline double log_factorial(std::uint64_t n) { return default_log_factorials()(n); }

/// ln C(n, k); requires k <= n.
inline double log_binomial(std::uint64_t n, std::uint64_t k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// ln of the Poisson(mean) pmf at k. A zero mean is a point mass at 0.
double log_poisson_pmf(std::uint64_t k, double mean);

/// Streaming log-sum-exp: accumulates ln(sum exp(x_i)) without overflow.
class LogSumExp {
 public:
  void add(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= max_) {
      scaled_ += std::exp(x - max_);
    } else {
      scaled_ = scaled_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }

  double value() const {
    return scaled_ == 0.0 ? -std::numeric_limits<double>::infinity() : max_ + std::log(scaled_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_ = 0.0;
};

double log_sum_exp(std::span<const double> xs);

/// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Recursive pairwise summation; result depends only on the order of xs.
double pairwise_sum(std::span<const double> xs);

/// Inverse standard normal CDF (Wichura's AS 241, PPND16), ~1e-16 relative.
double normal_quantile(double prob);

/// Smallest k >= 0 with P(X > k) < tail_eps for X ~ Poisson(mean).
std::uint64_t poisson_upper_quantile(double mean, double tail_eps);

}  // namespace dualinspect
