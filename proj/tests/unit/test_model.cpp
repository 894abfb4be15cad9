#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dualinspect/model.hpp"
#include "dualinspect/numeric.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

namespace di = dualinspect;
using di::CountPair;
using di::ModelParams;
using di::testing::pmf_oracle;

TEST(ModelParams, Validation) {
  EXPECT_ERROR_KIND(ModelParams(0.0, 0.5, 0.5), di::ErrorKind::Domain);
  EXPECT_ERROR_KIND(ModelParams(-1.0, 0.5, 0.5), di::ErrorKind::Domain);
  EXPECT_ERROR_KIND(ModelParams(1.0, -0.1, 0.5), di::ErrorKind::Domain);
  EXPECT_ERROR_KIND(ModelParams(1.0, 0.5, 1.1), di::ErrorKind::Domain);
  EXPECT_ERROR_KIND(ModelParams(std::nan(""), 0.5, 0.5), di::ErrorKind::Domain);
  EXPECT_NO_THROW(ModelParams(1.0, 0.0, 1.0));
}

TEST(ModelParams, Rates) {
  const ModelParams p(10.0, 0.4, 0.7);
  EXPECT_NEAR(p.theta1(), 10 * 0.4 * 0.3, 1e-14);
  EXPECT_NEAR(p.theta2(), 10 * 0.7 * 0.6, 1e-14);
  EXPECT_NEAR(p.theta12(), 10 * 0.4 * 0.7, 1e-14);
  EXPECT_TRUE(p.interior());
  EXPECT_FALSE(ModelParams(1.0, 1.0, 0.5).interior());
}

TEST(CountSample, NeedsTwoItems) {
  EXPECT_ERROR_KIND(di::CountSample({}), di::ErrorKind::SampleSize);
  EXPECT_ERROR_KIND(di::CountSample({{1, 1}}), di::ErrorKind::SampleSize);
  EXPECT_NO_THROW(di::CountSample({{1, 1}, {0, 0}}));
}

TEST(Pmf, PerfectDetectionAtZero) {
  EXPECT_NEAR(di::pmf(ModelParams(1, 1, 1), {0, 0}), std::exp(-1.0), 1e-15);
}

TEST(Pmf, BlindSecondInspector) {
  EXPECT_NEAR(di::pmf(ModelParams(5, 0.3, 0), {2, 0}), 0.25102143016698355755, 1e-14);
  EXPECT_EQ(di::pmf(ModelParams(5, 0.3, 0), {2, 1}), 0.0);
}

TEST(Pmf, AgreesWithOracleAtReferencePoint) {
  const ModelParams p(10, 0.4, 0.7);
  const double oracle = pmf_oracle(10, 0.4, 0.7, 3, 6);
  EXPECT_LE(di::testing::rel_diff(di::pmf(p, {3, 6}), oracle), 1e-12);
  // High-precision value of the same probability.
  EXPECT_LE(di::testing::rel_diff(di::pmf(p, {3, 6}), 0.035792358113528145108), 1e-12);
}

TEST(PmfOracle, ClosedForms) {
  EXPECT_NEAR(pmf_oracle(1, 1, 1, 0, 0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(pmf_oracle(2, 0.5, 0.5, 0, 0), 0.22313016014842982893, 1e-14);
}

TEST(Pmf, OracleAgreementOnGrid) {
  double worst = 0.0;
  for (double lambda : {0.5, 2.0, 10.0}) {
    for (double p1 : {0.1, 0.5, 0.9}) {
      for (double p2 : {0.1, 0.5, 0.9}) {
        const ModelParams params(lambda, p1, p2);
        for (std::uint32_t r1 = 0; r1 <= 15; ++r1) {
          for (std::uint32_t r2 = 0; r2 <= 15; ++r2) {
            worst = std::max(worst, std::abs(di::pmf(params, {r1, r2}) - pmf_oracle(lambda, p1, p2, r1, r2)));
          }
        }
      }
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Pmf, BoundaryRatesMatchOracle) {
  for (auto [p1, p2] : {std::pair{0.0, 0.5}, {1.0, 0.3}, {1.0, 1.0}, {0.0, 0.0}, {0.6, 1.0}}) {
    for (std::uint32_t r1 = 0; r1 <= 8; ++r1) {
      for (std::uint32_t r2 = 0; r2 <= 8; ++r2) {
        EXPECT_NEAR(di::pmf(ModelParams(3, p1, p2), {r1, r2}), pmf_oracle(3, p1, p2, r1, r2), 1e-12)
            << p1 << " " << p2 << " " << r1 << " " << r2;
      }
    }
  }
}

TEST(Pmf, FactoredSeriesFormWhereDefined) {
  // P = exp(-lambda(1-(1-p1)(1-p2))) th1^r1 th2^r2 / (r1! r2!) sum_l C(r1,l)C(r2,l) l! z^-l,
  // z = lambda(1-p1)(1-p2).
  const double lambda = 6.0, p1 = 0.35, p2 = 0.55;
  const double th1 = lambda * p1 * (1 - p2), th2 = lambda * p2 * (1 - p1);
  const double z = lambda * (1 - p1) * (1 - p2);
  for (std::uint32_t r1 = 0; r1 <= 10; ++r1) {
    for (std::uint32_t r2 = 0; r2 <= 10; ++r2) {
      // c_l = C(r1,l) C(r2,l) l! = r1! r2! / ((r1-l)! (r2-l)! l!)
      double series = 0.0;
      for (std::uint32_t l = 0; l <= std::min(r1, r2); ++l) {
        const double log_c = std::lgamma(r1 + 1.0) + std::lgamma(r2 + 1.0) - std::lgamma(r1 - l + 1.0) -
                             std::lgamma(r2 - l + 1.0) - std::lgamma(l + 1.0);
        series += std::exp(log_c - l * std::log(z));
      }
      const double front = std::exp(-lambda * (1 - (1 - p1) * (1 - p2)) + r1 * std::log(th1) + r2 * std::log(th2) -
                                    std::lgamma(r1 + 1.0) - std::lgamma(r2 + 1.0));
      EXPECT_LE(di::testing::rel_diff(di::pmf(ModelParams(lambda, p1, p2), {r1, r2}), front * series), 1e-12)
          << r1 << " " << r2;
    }
  }
}

TEST(Pmf, SwapSymmetryIsExact) {
  for (double lambda : {0.5, 3.0, 25.0}) {
    for (auto [p1, p2] : {std::pair{0.2, 0.9}, {0.4, 0.7}, {0.0, 0.5}, {1.0, 0.3}}) {
      const ModelParams a(lambda, p1, p2);
      for (std::uint32_t r1 = 0; r1 <= 12; ++r1) {
        for (std::uint32_t r2 = 0; r2 <= 12; ++r2) {
          ASSERT_EQ(di::log_pmf(a, {r1, r2}), di::log_pmf(a.swapped(), {r2, r1}));
        }
      }
    }
  }
}

TEST(Pmf, TruncatedNormalization) {
  for (double lambda : {0.5, 5.0, 20.0}) {
    for (auto [p1, p2] : {std::pair{0.4, 0.7}, {0.05, 0.95}, {0.9, 0.9}}) {
      const ModelParams params(lambda, p1, p2);
      const auto rmax = static_cast<std::uint32_t>(di::poisson_upper_quantile(lambda, 1e-10));
      di::CompensatedSum total;
      for (std::uint32_t r1 = 0; r1 <= rmax; ++r1) {
        for (std::uint32_t r2 = 0; r2 <= rmax; ++r2) total.add(di::pmf(params, {r1, r2}));
      }
      EXPECT_GE(total.value(), 1.0 - 1e-8) << lambda;
      EXPECT_LE(total.value(), 1.0 + 1e-12) << lambda;
    }
  }
}

TEST(Pmf, MarginalIsPoisson) {
  for (auto [lambda, p1, p2] : {std::tuple{10.0, 0.4, 0.7}, {2.0, 0.9, 0.1}, {15.0, 0.5, 0.5}}) {
    const ModelParams params(lambda, p1, p2);
    const auto r2max = static_cast<std::uint32_t>(di::poisson_upper_quantile(lambda * p2, 1e-15)) + 5;
    for (std::uint32_t r1 = 0; r1 <= 20; ++r1) {
      di::CompensatedSum s;
      for (std::uint32_t r2 = 0; r2 <= r2max; ++r2) s.add(di::pmf(params, {r1, r2}));
      EXPECT_NEAR(s.value(), di::testing::poisson_pmf(r1, lambda * p1), 1e-10) << r1;
    }
  }
}

TEST(Sampling, ZeroRatesGiveZeroCounts) {
  const auto s = di::sample_counts(ModelParams(10, 0, 0), 5, di::RngSeed{1});
  ASSERT_EQ(s.size(), 5u);
  for (const auto& pair : s.items()) EXPECT_EQ(pair, (CountPair{0, 0}));
}

TEST(Sampling, PerfectDetectionHasNoSingleSightings) {
  for (const auto& t : di::sample_full(ModelParams(10, 1, 1), 3, di::RngSeed{2})) {
    EXPECT_EQ(t.x1, 0u);
    EXPECT_EQ(t.x2, 0u);
  }
}

TEST(Sampling, SampleSizeError) {
  EXPECT_ERROR_KIND(di::sample_counts(ModelParams(1, 0.5, 0.5), 1, {}), di::ErrorKind::SampleSize);
  EXPECT_ERROR_KIND(di::sample_full(ModelParams(1, 0.5, 0.5), 0, {}), di::ErrorKind::SampleSize);
}

TEST(Sampling, DeterministicAndCollapseConsistent) {
  const ModelParams p(10, 0.4, 0.7);
  const auto a = di::sample_counts(p, 1000, di::RngSeed{11});
  const auto b = di::sample_counts(p, 1000, di::RngSeed{11});
  EXPECT_EQ(a, b);
  const auto full = di::sample_full(p, 1000, di::RngSeed{11});
  EXPECT_EQ(di::collapse(full), a);
  EXPECT_NE(di::sample_counts(p, 1000, di::RngSeed{12}), a);
}

TEST(Sampling, PrefixStableInM) {
  // Item i depends only on (seed, i).
  const ModelParams p(10, 0.4, 0.7);
  const auto small = di::sample_full(p, 10, di::RngSeed{3});
  const auto large = di::sample_full(p, 100, di::RngSeed{3});
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i], large[i]);
}

TEST(Sampling, MomentsOfLargeSample) {
  const ModelParams p(10, 0.4, 0.7);
  const std::size_t m = 100000;
  const auto full = di::sample_full(p, m, di::RngSeed{2024});
  double r1 = 0, r2 = 0, y = 0;
  for (const auto& t : full) {
    r1 += t.x1 + t.y;
    r2 += t.x2 + t.y;
    y += t.y;
  }
  r1 /= m;
  r2 /= m;
  y /= m;
  EXPECT_NEAR(r1, 4.0, 3 * std::sqrt(4.0 / m));
  EXPECT_NEAR(y, 2.8, 3 * std::sqrt(2.8 / m));

  std::vector<double> prods;
  prods.reserve(m);
  for (const auto& t : full) prods.push_back((t.x1 + t.y - r1) * (t.x2 + t.y - r2));
  double mean = 0, sq = 0;
  for (double v : prods) mean += v;
  mean /= m;
  for (double v : prods) sq += (v - mean) * (v - mean);
  const double se = std::sqrt(sq / (m - 1) / m);
  EXPECT_NEAR(mean * m / (m - 1), 2.8, 5 * se);
}
