#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "dualinspect/errors.hpp"
#include "dualinspect/numeric.hpp"
#include "oracles.hpp"

namespace di = dualinspect;
using di::testing::poisson_tail;

TEST(LogFactorial, TableMatchesLgamma) {
  for (std::uint64_t n : {0u, 1u, 2u, 10u, 170u, 1000u, 999999u}) {
    EXPECT_NEAR(di::log_factorial(n), std::lgamma(static_cast<double>(n) + 1.0), 1e-9 * (1.0 + n)) << n;
  }
}

TEST(LogFactorial, FallsBackBeyondCap) {
  const di::LogFactorialTable small(10);
  EXPECT_EQ(small.cap(), 10u);
  EXPECT_DOUBLE_EQ(small(11), std::lgamma(12.0));
  EXPECT_DOUBLE_EQ(small(2000), std::lgamma(2001.0));
  EXPECT_NEAR(small(5), std::log(120.0), 1e-14);
}

TEST(LogBinomial, SmallValues) {
  EXPECT_NEAR(di::log_binomial(5, 2), std::log(10.0), 1e-14);
  EXPECT_NEAR(di::log_binomial(7, 0), 0.0, 1e-15);
  EXPECT_NEAR(di::log_binomial(7, 7), 0.0, 1e-15);
}

TEST(LogPoissonPmf, ZeroMeanIsPointMass) {
  EXPECT_EQ(di::log_poisson_pmf(0, 0.0), 0.0);
  EXPECT_EQ(di::log_poisson_pmf(3, 0.0), -std::numeric_limits<double>::infinity());
}

TEST(LogPoissonPmf, MatchesDirectFormula) {
  EXPECT_NEAR(std::exp(di::log_poisson_pmf(2, 1.5)), 0.25102143016698355755, 1e-15);
  EXPECT_NEAR(di::log_poisson_pmf(0, 3.0), -3.0, 1e-15);
}

TEST(LogSumExp, AgreesWithNaiveSum) {
  const std::vector<double> xs{-1.0, 0.5, 2.0, -3.0};
  double naive = 0.0;
  for (double x : xs) naive += std::exp(x);
  EXPECT_NEAR(di::log_sum_exp(xs), std::log(naive), 1e-14);
}

TEST(LogSumExp, NoOverflowOrUnderflow) {
  EXPECT_NEAR(di::log_sum_exp(std::vector<double>{1000.0, 1000.0}), 1000.0 + std::log(2.0), 1e-12);
  EXPECT_NEAR(di::log_sum_exp(std::vector<double>{-1000.0, -1000.0}), -1000.0 + std::log(2.0), 1e-12);
}

TEST(LogSumExp, EmptyAndNegativeInfinity) {
  EXPECT_EQ(di::log_sum_exp(std::vector<double>{}), -std::numeric_limits<double>::infinity());
  di::LogSumExp acc;
  acc.add(-std::numeric_limits<double>::infinity());
  acc.add(0.0);
  EXPECT_EQ(acc.value(), 0.0);
}

TEST(CompensatedSum, RecoversLostLowBits) {
  di::CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1.0);
}

TEST(PairwiseSum, ExactOnIntegers) {
  std::vector<double> xs(1000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
  EXPECT_EQ(di::pairwise_sum(xs), 499500.0);
  EXPECT_EQ(di::pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(NormalQuantile, ReferenceValues) {
  // High-precision erf-inverse values.
  EXPECT_EQ(di::normal_quantile(0.5), 0.0);
  EXPECT_NEAR(di::normal_quantile(0.975), 1.9599639845400542355, 1e-12);
  EXPECT_NEAR(di::normal_quantile(0.995), 2.575829303548900761, 1e-12);
  EXPECT_NEAR(di::normal_quantile(0.84), 0.99445788320975316774, 1e-12);
  EXPECT_NEAR(di::normal_quantile(0.3), -0.52440051270804078404, 1e-12);
  EXPECT_NEAR(di::normal_quantile(0.001), -3.0902323061678135415, 1e-12);
  EXPECT_NEAR(di::normal_quantile(1e-10), -6.3613409024040562047, 1e-10);
}

TEST(NormalQuantile, Antisymmetric) {
  for (double p : {0.01, 0.1, 0.2, 0.37, 0.49}) {
    EXPECT_NEAR(di::normal_quantile(p), -di::normal_quantile(1.0 - p), 1e-12) << p;
  }
}

TEST(NormalQuantile, DomainErrors) {
  for (double p : {0.0, 1.0, -0.1, 1.5, std::numeric_limits<double>::quiet_NaN()}) {
    try {
      di::normal_quantile(p);
      ADD_FAILURE() << "no error for " << p;
    } catch (const di::Error& e) {
      EXPECT_EQ(e.kind(), di::ErrorKind::Domain);
    }
  }
}

TEST(PoissonUpperQuantile, IsTheSmallestAdequateBound) {
  for (double mean : {0.5, 4.0, 10.0, 28.0, 100.0}) {
    for (double eps : {1e-6, 1e-10, 1e-12}) {
      const auto k = di::poisson_upper_quantile(mean, eps);
      EXPECT_LT(poisson_tail(k, mean), eps) << mean << " " << eps;
      // The bound is allowed to be loose by a little, never by much.
      if (k >= 3) EXPECT_GE(poisson_tail(k - 3, mean), eps) << mean << " " << eps;
    }
  }
}
