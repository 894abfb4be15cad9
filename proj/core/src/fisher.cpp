#include "dualinspect/fisher.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "dualinspect/errors.hpp"
#include "dualinspect/numeric.hpp"

namespace dualinspect {

namespace {

constexpr std::uint64_t kGridBuffer = 10;
constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

// Stencil layout per step level: 6 axial points (+i, -i for i = 0..2), then
// 12 mixed points (++, +-, -+, --) for each pair in kPairs.
constexpr std::size_t kAxial = 6;
constexpr std::size_t kLevelSize = kAxial + 12;

struct Steps {
  std::array<double, 3> h;
};

Steps base_steps(const ModelParams& params) {
  const auto hp = [](double p) { return std::min(1e-4, 0.1 * std::min(p, 1.0 - p)); };
  return {{1e-4 * params.lambda(), hp(params.p1()), hp(params.p2())}};
}

ModelParams shifted(const ModelParams& params, const std::array<double, 3>& delta) {
  return ModelParams(params.lambda() + delta[0], params.p1() + delta[1], params.p2() + delta[2]);
}

std::vector<ModelParams> stencil(const ModelParams& params, const Steps& steps, int levels,
                                 bool with_mixed) {
  std::vector<ModelParams> points;
  points.push_back(params);
  for (int level = 0; level < levels; ++level) {
    const double scale = std::ldexp(1.0, -level);
    std::array<double, 3> h{};
    for (int i = 0; i < 3; ++i) h[i] = steps.h[i] * scale;
    for (int i = 0; i < 3; ++i) {
      for (double sign : {1.0, -1.0}) {
        std::array<double, 3> d{};
        d[i] = sign * h[i];
        points.push_back(shifted(params, d));
      }
    }
    if (!with_mixed) continue;
    for (const auto& [i, j] : kPairs) {
      for (const auto& [si, sj] : {std::array{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}) {
        std::array<double, 3> d{};
        d[i] = si * h[i];
        d[j] = sj * h[j];
        points.push_back(shifted(params, d));
      }
    }
  }
  return points;
}

Eigen::Matrix3d hessian_at_level(const std::vector<double>& f, std::size_t base,
                                 const std::array<double, 3>& h) {
  Eigen::Matrix3d hess;
  const double f0 = f[0];
  for (int i = 0; i < 3; ++i) {
    hess(i, i) = (f[base + 2 * i] - 2.0 * f0 + f[base + 2 * i + 1]) / (h[i] * h[i]);
  }
  for (std::size_t k = 0; k < kPairs.size(); ++k) {
    const auto [i, j] = kPairs[k];
    const std::size_t o = base + kAxial + 4 * k;
    const double v = (f[o] - f[o + 1] - f[o + 2] + f[o + 3]) / (4.0 * h[i] * h[j]);
    hess(i, j) = v;
    hess(j, i) = v;
  }
  return hess;
}

struct Grid {
  std::uint64_t r1_max;
  std::uint64_t r2_max;
};

Grid make_grid(const ModelParams& params, double tail_eps) {
  if (!params.interior()) {
    throw Error(ErrorKind::Domain, "Fisher information needs detection rates strictly inside (0,1)");
  }
  if (!(tail_eps > 0.0 && tail_eps <= 1e-6)) {
    throw Error(ErrorKind::Domain, "tail_eps must lie in (0, 1e-6]");
  }
  return {poisson_upper_quantile(params.lambda() * params.p1(), tail_eps) + kGridBuffer,
          poisson_upper_quantile(params.lambda() * params.p2(), tail_eps) + kGridBuffer};
}

FisherMatrix finish(const std::array<CompensatedSum, 6>& acc, const CompensatedSum& mass,
                    const Grid& grid, double tail_eps) {
  FisherMatrix out;
  out.r1_max = grid.r1_max;
  out.r2_max = grid.r2_max;
  out.truncation_r_max = std::max(grid.r1_max, grid.r2_max);
  out.captured_mass = mass.value();
  if (out.captured_mass < 1.0 - 100.0 * tail_eps) {
    throw Error(ErrorKind::Truncation,
                "Fisher grid captured only " + std::to_string(out.captured_mass) + " of the mass");
  }
  std::size_t k = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      out.entries(i, j) = acc[k].value();
      out.entries(j, i) = acc[k].value();
      ++k;
    }
  }
  return out;
}

}  // namespace

FisherMatrix fisher_information(const ModelParams& params, double tail_eps) {
  const Grid grid = make_grid(params, tail_eps);
  const Steps steps = base_steps(params);
  const std::vector<ModelParams> points = stencil(params, steps, 2, true);
  std::array<double, 3> half{};
  for (int i = 0; i < 3; ++i) half[i] = 0.5 * steps.h[i];

  std::array<CompensatedSum, 6> acc;
  CompensatedSum mass;
  std::vector<double> f(points.size());
  for (std::uint64_t r1 = 0; r1 <= grid.r1_max; ++r1) {
    for (std::uint64_t r2 = 0; r2 <= grid.r2_max; ++r2) {
      const CountPair pair{static_cast<std::uint32_t>(r1), static_cast<std::uint32_t>(r2)};
      for (std::size_t k = 0; k < points.size(); ++k) f[k] = log_pmf(points[k], pair);
      const double prob = std::exp(f[0]);
      mass.add(prob);
      const Eigen::Matrix3d coarse = hessian_at_level(f, 1, steps.h);
      const Eigen::Matrix3d fine = hessian_at_level(f, 1 + kLevelSize, half);
      const Eigen::Matrix3d hess = (4.0 * fine - coarse) / 3.0;
      std::size_t k = 0;
      for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) acc[k++].add(-prob * hess(i, j));
      }
    }
  }
  return finish(acc, mass, grid, tail_eps);
}

FisherMatrix fisher_information_outer_product(const ModelParams& params, double tail_eps) {
  const Grid grid = make_grid(params, tail_eps);
  const Steps steps = base_steps(params);
  const std::vector<ModelParams> points = stencil(params, steps, 2, false);

  std::array<CompensatedSum, 6> acc;
  CompensatedSum mass;
  std::vector<double> f(points.size());
  for (std::uint64_t r1 = 0; r1 <= grid.r1_max; ++r1) {
    for (std::uint64_t r2 = 0; r2 <= grid.r2_max; ++r2) {
      const CountPair pair{static_cast<std::uint32_t>(r1), static_cast<std::uint32_t>(r2)};
      for (std::size_t k = 0; k < points.size(); ++k) f[k] = log_pmf(points[k], pair);
      const double prob = std::exp(f[0]);
      mass.add(prob);
      std::array<double, 3> score{};
      for (int i = 0; i < 3; ++i) {
        const double coarse = (f[1 + 2 * i] - f[2 + 2 * i]) / (2.0 * steps.h[i]);
        const double fine = (f[1 + kAxial + 2 * i] - f[2 + kAxial + 2 * i]) / steps.h[i];
        score[i] = (4.0 * fine - coarse) / 3.0;
      }
      std::size_t k = 0;
      for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) acc[k++].add(prob * score[i] * score[j]);
      }
    }
  }
  return finish(acc, mass, grid, tail_eps);
}

ParamValues inverse_information_diagonal(const FisherMatrix& fisher) {
  const Eigen::LLT<Eigen::Matrix3d> llt(fisher.entries);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::Singular, "Fisher information matrix is not positive definite");
  }
  const Eigen::Matrix3d inv = llt.solve(Eigen::Matrix3d::Identity());
  return {inv(0, 0), inv(1, 1), inv(2, 2)};
}

ParamValues mle_asymptotic_variance(const FisherMatrix& fisher, std::size_t m) {
  if (m < 2) throw Error(ErrorKind::SampleSize, "asymptotic variances need M >= 2");
  const ParamValues d = inverse_information_diagonal(fisher);
  const double mm = static_cast<double>(m);
  return {d.lambda / mm, d.p1 / mm, d.p2 / mm};
}

EstimateReport mle_confidence_intervals(const MleEstimate& est, const FisherMatrix& fisher,
                                        std::size_t m, double alpha) {
  const ParamValues v = mle_asymptotic_variance(fisher, m);
  EstimateReport report = make_interval_report(
      Method::Mle, m, alpha, {est.lambda_star, est.p1_star, est.p2_star},
      {std::sqrt(v.lambda), std::sqrt(v.p1), std::sqrt(v.p2)});
  report.solver = SolverInfo{est.solver_iterations, est.residuals};
  return report;
}

}  // namespace dualinspect
