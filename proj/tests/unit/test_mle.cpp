#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dualinspect/mle.hpp"
#include "dualinspect/moment.hpp"
#include "dualinspect/numeric.hpp"
#include "expect_error.hpp"
#include "oracles.hpp"

namespace di = dualinspect;
using di::CountSample;
using di::LikelihoodContext;
using di::ModelParams;
using di::testing::central_difference;
using di::testing::rel_diff;

namespace {

LikelihoodContext ctx_of(std::vector<di::CountPair> items) { return LikelihoodContext(CountSample(std::move(items))); }

double mean_log_pmf(const ModelParams& p, const CountSample& s) {
  double total = 0.0;
  for (const auto& pair : s.items()) total += di::log_pmf(p, pair);
  return total / static_cast<double>(s.size());
}

}  // namespace

TEST(LikelihoodContext, CacheMatchesDirectCoefficients) {
  const auto s = di::sample_counts(ModelParams(12, 0.5, 0.6), 300, di::RngSeed{1});
  const LikelihoodContext ctx(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto [r1, r2] = s[i];
    const auto coeffs = ctx.log_coefficients(i);
    ASSERT_EQ(coeffs.size(), std::min(r1, r2) + 1u);
    for (std::uint32_t l = 0; l < coeffs.size(); ++l) {
      const double direct = std::lgamma(r1 + 1.0) - std::lgamma(l + 1.0) - std::lgamma(r1 - l + 1.0) +
                            std::lgamma(r2 + 1.0) - std::lgamma(l + 1.0) - std::lgamma(r2 - l + 1.0) +
                            std::lgamma(l + 1.0);
      EXPECT_NEAR(coeffs[l], direct, 1e-10 * (1 + std::abs(direct)));
    }
  }
  std::size_t total = 0;
  for (const auto& g : ctx.groups()) total += g.count;
  EXPECT_EQ(total, s.size());
}

TEST(Psi, ZeroCountsGiveZero) {
  const auto ctx = ctx_of({{0, 0}, {0, 0}});
  for (double z : {0.01, 1.0, 50.0}) {
    EXPECT_EQ(di::psi(z, ctx), 0.0);
    EXPECT_EQ(di::psi_prime(z, ctx), 0.0);
  }
}

TEST(Psi, SingleJointDetection) {
  const auto ctx = ctx_of({{1, 1}, {1, 1}});
  EXPECT_NEAR(di::psi(1.0, ctx), std::log(2.0), 1e-15);
  for (double z : {0.1, 2.0, 30.0}) EXPECT_NEAR(di::psi(z, ctx), std::log1p(1 / z), 1e-15);
  EXPECT_NEAR(di::psi_prime(2.0, ctx), -1.0 / 6.0, 1e-15);
}

TEST(Psi, MixedItemsAverage) {
  const auto ctx = ctx_of({{1, 1}, {0, 0}});
  for (double z : {0.5, 1.0, 7.0}) EXPECT_NEAR(di::psi(z, ctx), 0.5 * std::log1p(1 / z), 1e-15);
}

TEST(Psi, DomainErrors) {
  const auto ctx = ctx_of({{1, 1}, {0, 0}});
  EXPECT_ERROR_KIND(di::psi(0.0, ctx), di::ErrorKind::Domain);
  EXPECT_ERROR_KIND(di::psi_prime(-1.0, ctx), di::ErrorKind::Domain);
}

TEST(PsiPrime, MatchesFiniteDifferenceAndIsNonPositive) {
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto s = di::sample_counts(ModelParams(2 + 3 * k, 0.3 + 0.05 * k, 0.8 - 0.04 * k), 40,
                                     di::derive_seed(di::RngSeed{3}, k));
    const LikelihoodContext ctx(s);
    for (double z = 0.01; z <= 100.0; z *= 1.7) {
      const double fd = central_difference([&](double x) { return di::psi(x, ctx); }, z, 1e-6 * z);
      const double an = di::psi_prime(z, ctx);
      EXPECT_LE(an, 0.0);
      EXPECT_LE(rel_diff(an, fd), 1e-6) << k << " z=" << z;
    }
  }
}

TEST(LogLikelihood, ZeroSample) {
  const auto ctx = ctx_of({{0, 0}, {0, 0}});
  const ModelParams p(4.0, 0.3, 0.6);
  EXPECT_NEAR(di::log_likelihood(p, ctx), -4.0 * (1 - 0.7 * 0.4), 1e-14);
}

TEST(LogLikelihood, EqualsMeanLogPmf) {
  const ModelParams truth(10, 0.4, 0.7);
  const auto s = di::sample_counts(truth, 100, di::RngSeed{8});
  const LikelihoodContext ctx(s);
  for (const ModelParams& p : {truth, ModelParams(7, 0.2, 0.9), ModelParams(30, 0.1, 0.15)}) {
    EXPECT_NEAR(di::log_likelihood(p, ctx), mean_log_pmf(p, s), 1e-9);
  }
}

TEST(LogLikelihood, TruthBeatsHalvedLambda) {
  const ModelParams truth(10, 0.4, 0.7);
  const LikelihoodContext ctx(di::sample_counts(truth, 10000, di::RngSeed{10}));
  EXPECT_GT(di::log_likelihood(truth, ctx), di::log_likelihood(ModelParams(5, 0.4, 0.7), ctx));
}

TEST(LogLikelihood, BoundaryIsDomainError) {
  const auto ctx = ctx_of({{1, 1}, {0, 2}});
  EXPECT_ERROR_KIND(di::log_likelihood(ModelParams(3, 1.0, 0.5), ctx), di::ErrorKind::Domain);
  EXPECT_ERROR_KIND(di::log_likelihood_gradient(ModelParams(3, 0.5, 0.0), ctx), di::ErrorKind::Domain);
}

TEST(LogLikelihood, GradientMatchesFiniteDifferences) {
  di::SplitMix64 gen(123u);
  for (int k = 0; k < 100; ++k) {
    const ModelParams truth(1 + 29 * gen.uniform(), 0.05 + 0.9 * gen.uniform(), 0.05 + 0.9 * gen.uniform());
    const LikelihoodContext ctx(di::sample_counts(truth, 50, di::derive_seed(di::RngSeed{321}, k)));
    const ModelParams at(truth.lambda() * (0.7 + 0.6 * gen.uniform()), 0.05 + 0.9 * gen.uniform(),
                         0.05 + 0.9 * gen.uniform());
    const auto grad = di::log_likelihood_gradient(at, ctx);
    const double l = at.lambda(), a = at.p1(), b = at.p2();
    const double fl = central_difference([&](double x) { return di::log_likelihood(ModelParams(x, a, b), ctx); },
                                         l, 1e-6 * l);
    const double f1 = central_difference([&](double x) { return di::log_likelihood(ModelParams(l, x, b), ctx); },
                                         a, 1e-6);
    const double f2 = central_difference([&](double x) { return di::log_likelihood(ModelParams(l, a, x), ctx); },
                                         b, 1e-6);
    EXPECT_LE(rel_diff(grad.lambda, fl, 1e-6), 1e-5) << k;
    EXPECT_LE(rel_diff(grad.p1, f1, 1e-6), 1e-5) << k;
    EXPECT_LE(rel_diff(grad.p2, f2, 1e-6), 1e-5) << k;
  }
}

TEST(LogLikelihood, RateConditionsVanishOnTheProfile) {
  // Eliminating Psi' between the lambda condition and each rate condition
  // leaves (r_i - lambda p_i) / (p_i (1 - p_i)), which is zero once
  // p_i = r_i / lambda, whatever lambda is.
  for (std::uint64_t k = 0; k < 20; ++k) {
    const LikelihoodContext ctx(
        di::sample_counts(ModelParams(10, 0.4, 0.7), 100, di::derive_seed(di::RngSeed{4}, k)));
    const double floor = std::max(ctx.r_bar_1(), ctx.r_bar_2());
    for (double f : {1.01, 1.5, 3.0, 20.0}) {
      const double lambda = floor * f;
      const double p1 = ctx.r_bar_1() / lambda, p2 = ctx.r_bar_2() / lambda;
      const auto g = di::log_likelihood_gradient(ModelParams(lambda, p1, p2), ctx);
      const double scale = std::abs(g.p1) + std::abs(g.p2) + lambda * std::abs(g.lambda) + 1.0;
      EXPECT_LE(std::abs(g.p1 + lambda / (1 - p1) * g.lambda), 1e-10 * scale) << k << " " << f;
      EXPECT_LE(std::abs(g.p2 + lambda / (1 - p2) * g.lambda), 1e-10 * scale) << k << " " << f;
    }
  }
}

TEST(LogLikelihood, RateConditionsAwayFromTheProfile) {
  const LikelihoodContext ctx(di::sample_counts(ModelParams(10, 0.4, 0.7), 100, di::RngSeed{4}));
  const double lambda = 12.0, p1 = 0.3, p2 = 0.5;
  const auto g = di::log_likelihood_gradient(ModelParams(lambda, p1, p2), ctx);
  EXPECT_NEAR(g.p1 + lambda / (1 - p1) * g.lambda, (ctx.r_bar_1() - lambda * p1) / (p1 * (1 - p1)), 1e-10);
  EXPECT_NEAR(g.p2 + lambda / (1 - p2) * g.lambda, (ctx.r_bar_2() - lambda * p2) / (p2 * (1 - p2)), 1e-10);
}

TEST(ScalarResidual, DomainGuards) {
  EXPECT_ERROR_KIND(di::mle_scalar_residual(5.0, ctx_of({{0, 0}, {0, 0}})), di::ErrorKind::Domain);
  const auto ctx = ctx_of({{2, 3}, {1, 1}, {3, 4}, {0, 2}});
  EXPECT_ERROR_KIND(di::mle_scalar_residual(2.5, ctx), di::ErrorKind::Domain);
  EXPECT_ERROR_KIND(di::mle_scalar_residual(1.0, ctx), di::ErrorKind::Domain);
  EXPECT_NO_THROW(di::mle_scalar_residual(2.51, ctx));
}

TEST(ScalarResidual, ChangesSignAroundMomentEstimate) {
  const auto s = di::sample_counts(ModelParams(10, 0.4, 0.7), 500, di::RngSeed{500});
  const LikelihoodContext ctx(s);
  const double lambda_hat = di::estimate_moment(s).lambda_hat;
  const double floor = std::max(ctx.r_bar_1(), ctx.r_bar_2());
  bool found = false;
  for (double f = 0.05; f <= 0.5 && !found; f += 0.05) {
    const double lo = std::max(lambda_hat * (1 - f), floor * (1 + 1e-6));
    found = di::mle_scalar_residual(lo, ctx) * di::mle_scalar_residual(lambda_hat * (1 + f), ctx) < 0;
  }
  EXPECT_TRUE(found);
}

TEST(SolveMle, SeededSampleAtM500) {
  const auto s = di::sample_counts(ModelParams(10, 0.4, 0.7), 500, di::RngSeed{500});
  const LikelihoodContext ctx(s);
  const auto est = di::solve_mle(ctx);
  EXPECT_NEAR(est.lambda_star, 10.0, 3 * 0.56);
  EXPECT_LE(std::abs(di::mle_scalar_residual(est.lambda_star, ctx)), 1e-10);
  for (double r : est.residuals) EXPECT_LE(std::abs(r), 1e-8);
  EXPECT_LE(rel_diff(est.p1_star, ctx.r_bar_1() / est.lambda_star), 1e-12);
  EXPECT_LE(rel_diff(est.p2_star, ctx.r_bar_2() / est.lambda_star), 1e-12);
  EXPECT_GT(est.lambda_star, std::max(ctx.r_bar_1(), ctx.r_bar_2()));
  EXPECT_GT(est.solver_iterations, 0);
  EXPECT_LE(est.bracket_low, est.lambda_star);
  EXPECT_GE(est.bracket_high, est.lambda_star);
}

TEST(SolveMle, IsALocalMaximumOfTheDirectLikelihood) {
  // Perturbations judged with the convolution pmf, not the Psi form.
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto s = di::sample_counts(ModelParams(10, 0.4, 0.7), 200, di::derive_seed(di::RngSeed{6}, k));
    const auto est = di::solve_mle(s);
    const ModelParams best(est.lambda_star, est.p1_star, est.p2_star);
    const double ll = mean_log_pmf(best, s);
    for (int axis = 0; axis < 3; ++axis) {
      for (double d : {-1e-3, 1e-3}) {
        double v[3] = {est.lambda_star, est.p1_star, est.p2_star};
        v[axis] += d * (axis == 0 ? est.lambda_star : 1.0);
        EXPECT_LT(mean_log_pmf(ModelParams(v[0], v[1], v[2]), s), ll) << k << " " << axis;
      }
    }
  }
}

TEST(SolveMle, ManySamplesSatisfyTheContract) {
  int solved = 0;
  for (std::uint64_t k = 0; k < 300; ++k) {
    const auto s = di::sample_counts(ModelParams(10, 0.4, 0.7), 100, di::derive_seed(di::RngSeed{42}, k));
    const LikelihoodContext ctx(s);
    di::MleEstimate est;
    try {
      est = di::solve_mle(ctx);
    } catch (const di::Error& e) {
      EXPECT_TRUE(di::is_estimation_pathology(e.kind()));
      continue;
    }
    ++solved;
    EXPECT_GT(est.lambda_star, std::max(ctx.r_bar_1(), ctx.r_bar_2()));
    for (double r : est.residuals) EXPECT_LE(std::abs(r), 1e-8) << k;
    EXPECT_LE(std::abs(est.scalar_residual), 1e-10) << k;
  }
  EXPECT_GT(solved, 290);
}

TEST(SolveMle, DegenerateConstantPairs) {
  try {
    di::solve_mle(CountSample({{3, 3}, {3, 3}}));
    FAIL() << "expected no interior maximum";
  } catch (const di::NoInteriorMaximumError& e) {
    EXPECT_EQ(e.kind(), di::ErrorKind::NoInteriorMaximum);
    EXPECT_LE(e.scanned_low(), e.scanned_high());
  }
}

TEST(SolveMle, UndefinedWhenAMeanIsZero) {
  EXPECT_ERROR_KIND(di::solve_mle(CountSample({{0, 0}, {0, 0}})), di::ErrorKind::UndefinedEstimator);
  EXPECT_ERROR_KIND(di::solve_mle(CountSample({{0, 1}, {0, 2}})), di::ErrorKind::UndefinedEstimator);
}

TEST(SolveMle, SwapSymmetry) {
  const auto s = di::sample_counts(ModelParams(10, 0.4, 0.7), 300, di::RngSeed{17});
  std::vector<di::CountPair> swapped;
  for (const auto& p : s.items()) swapped.push_back({p.r2, p.r1});
  const auto a = di::solve_mle(s);
  const auto b = di::solve_mle(CountSample(swapped));
  EXPECT_LE(rel_diff(a.lambda_star, b.lambda_star), 1e-10);
  EXPECT_LE(rel_diff(a.p1_star, b.p2_star), 1e-10);
}
