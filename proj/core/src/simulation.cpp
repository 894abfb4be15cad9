#include "dualinspect/simulation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <thread>

#include "dualinspect/capture_recapture.hpp"
#include "dualinspect/moment.hpp"
#include "dualinspect/numeric.hpp"

namespace dualinspect {

std::vector<Method> MethodSet::list() const {
  std::vector<Method> out;
  for (Method m : {Method::Moment, Method::Mle, Method::CaptureRecapture}) {
    if (contains(m)) out.push_back(m);
  }
  return out;
}

std::size_t MethodSummary::failure_total() const {
  std::size_t total = 0;
  for (const auto& [kind, count] : failures) total += count;
  return total;
}

const MethodSummary* StudyReport::find(Method method) const {
  for (const auto& s : methods) {
    if (s.method == method) return &s;
  }
  return nullptr;
}

namespace {

struct Outcome {
  bool ok = false;
  bool flagged = false;
  ErrorKind failure = ErrorKind::Domain;
  ParamValues estimate;
};

using ReplicateOutcome = std::array<Outcome, 3>;

std::size_t slot(Method m) { return static_cast<std::size_t>(m); }

template <class F>
Outcome guarded(F&& estimate) {
  Outcome out;
  try {
    estimate(out);
    out.ok = true;
  } catch (const Error& e) {
    out.failure = e.kind();
  }
  return out;
}

ReplicateOutcome run_replicate(const StudyConfig& config, std::size_t index) {
  ReplicateOutcome result;
  const auto triples = sample_full(config.params, config.m, derive_seed(config.seed, index));
  if (config.methods.contains(Method::CaptureRecapture)) {
    result[slot(Method::CaptureRecapture)] = guarded([&](Outcome& out) {
      const CrEstimate est = estimate_cr(FullCountSample(triples));
      out.estimate = {est.lambda_hat, est.p1_hat, est.p2_hat};
    });
  }
  if (!config.methods.contains(Method::Moment) && !config.methods.contains(Method::Mle)) {
    return result;
  }
  const CountSample counts = collapse(triples);
  if (config.methods.contains(Method::Moment)) {
    result[slot(Method::Moment)] = guarded([&](Outcome& out) {
      const MomentEstimate est = estimate_moment(counts);
      out.estimate = {est.lambda_hat, est.p1_hat, est.p2_hat};
      out.flagged = est.flagged();
    });
  }
  if (config.methods.contains(Method::Mle)) {
    result[slot(Method::Mle)] = guarded([&](Outcome& out) {
      const MleEstimate est = solve_mle(counts, config.solver);
      out.estimate = {est.lambda_star, est.p1_star, est.p2_star};
    });
  }
  return result;
}

std::vector<ReplicateOutcome> run_replicates(const StudyConfig& config) {
  std::vector<ReplicateOutcome> outcomes(config.replicates);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, config.threads), config.replicates));
  if (workers <= 1) {
    for (std::size_t i = 0; i < config.replicates; ++i) outcomes[i] = run_replicate(config, i);
    return outcomes;
  }
  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t begin = next.fetch_add(kChunk);
          if (begin >= config.replicates) return;
          const std::size_t end = std::min(begin + kChunk, config.replicates);
          for (std::size_t i = begin; i < end; ++i) outcomes[i] = run_replicate(config, i);
        }
      });
    }
  }
  return outcomes;
}

struct Moments {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std = std::numeric_limits<double>::quiet_NaN();
};

Moments moments_of(const std::vector<double>& xs) {
  Moments out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  out.mean = pairwise_sum(xs) / n;
  if (xs.size() == 1) {
    out.std = 0.0;
    return out;
  }
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - out.mean) * (xs[i] - out.mean);
  out.std = std::sqrt(pairwise_sum(sq) / (n - 1.0));
  return out;
}

MethodSummary summarize_method(Method method, const StudyConfig& config,
                               const std::vector<ReplicateOutcome>& outcomes) {
  MethodSummary summary;
  summary.method = method;
  std::array<std::vector<double>, 3> values;
  for (const auto& rep : outcomes) {
    const Outcome& o = rep[slot(method)];
    if (!o.ok) {
      ++summary.failures[o.failure];
      continue;
    }
    ++summary.successes;
    if (o.flagged) ++summary.flagged;
    values[0].push_back(o.estimate.lambda);
    values[1].push_back(o.estimate.p1);
    values[2].push_back(o.estimate.p2);
  }
  const Moments ml = moments_of(values[0]);
  const Moments m1 = moments_of(values[1]);
  const Moments m2 = moments_of(values[2]);
  summary.mean = {ml.mean, m1.mean, m2.mean};
  summary.std = {ml.std, m1.std, m2.std};
  summary.bias = {ml.mean - config.params.lambda(), m1.mean - config.params.p1(),
                  m2.mean - config.params.p2()};
  return summary;
}

}  // namespace

StudyReport run_study(const StudyConfig& config) {
  if (config.replicates < 1) throw Error(ErrorKind::Domain, "a study needs at least one replicate");
  if (config.m < 2) throw Error(ErrorKind::SampleSize, "a study needs M >= 2");
  if (config.methods.empty()) throw Error(ErrorKind::Domain, "a study needs at least one method");

  const std::vector<ReplicateOutcome> outcomes = run_replicates(config);
  StudyReport report;
  report.config = config;
  report.replicates = config.replicates;
  for (Method m : config.methods.list()) report.methods.push_back(summarize_method(m, config, outcomes));

  if (config.methods.contains(Method::Moment) && config.methods.contains(Method::Mle)) {
    HeadToHead h2h;
    const double truth = config.params.lambda();
    for (const auto& rep : outcomes) {
      const Outcome& mom = rep[slot(Method::Moment)];
      const Outcome& mle = rep[slot(Method::Mle)];
      if (!mom.ok || !mle.ok) continue;
      ++h2h.compared;
      if (std::abs(mle.estimate.lambda - truth) < std::abs(mom.estimate.lambda - truth)) ++h2h.mle_better;
    }
    h2h.fraction = h2h.compared == 0 ? std::numeric_limits<double>::quiet_NaN()
                                     : static_cast<double>(h2h.mle_better) / static_cast<double>(h2h.compared);
    report.head_to_head = h2h;
  }
  return report;
}

double std_ratio(const ModelParams& params, double tail_eps) {
  constexpr std::size_t kAnyM = 1000;
  const double v_mle = mle_asymptotic_variance(fisher_information(params, tail_eps), kAnyM).lambda;
  const double v_moment = moment_asymptotic_variance(params, kAnyM).lambda;
  return std::sqrt(v_mle / v_moment);
}

std::vector<RatioPoint> std_ratio_curve(double lambda, double p1, const std::vector<double>& p2_grid,
                                        double tail_eps) {
  std::vector<RatioPoint> out;
  out.reserve(p2_grid.size());
  for (double p2 : p2_grid) {
    out.push_back({p1, p2, lambda, std_ratio(ModelParams(lambda, p1, p2), tail_eps)});
  }
  return out;
}

std::vector<double> default_p2_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(0.05 * k);
  return grid;
}

TableReport reproduce_table(TableId which, std::optional<std::size_t> replicates_override, RngSeed seed,
                            unsigned threads) {
  const ModelParams params(10.0, 0.4, 0.7);
  constexpr std::array<std::size_t, 3> kSizes{100, 200, 500};

  TableReport table;
  table.id = which;
  table.seed = seed;
  table.replicates = replicates_override.value_or(which == TableId::T1 ? kTable1Replicates : kTable23Replicates);

  const auto study = [&](std::size_t m, MethodSet methods) {
    StudyConfig config;
    config.params = params;
    config.m = m;
    config.replicates = table.replicates;
    config.seed = derive_seed(seed, m);
    config.methods = methods;
    config.threads = threads;
    return run_study(config);
  };

  switch (which) {
    case TableId::T1: {
      table.title = "Moment estimator of lambda: simulation vs asymptotic (lambda=10, p1=0.4, p2=0.7)";
      table.columns = {"M", "mean_sim", "mean_app", "std_sim", "std_app", "failures"};
      for (std::size_t m : kSizes) {
        const StudyReport r = study(m, {Method::Moment});
        const MethodSummary& s = r.methods.front();
        table.rows.push_back({static_cast<double>(m), s.mean.lambda, moment_asymptotic_expectation(params, m).lambda,
                              s.std.lambda, std::sqrt(moment_asymptotic_variance(params, m).lambda),
                              static_cast<double>(s.failure_total())});
      }
      break;
    }
    case TableId::T2: {
      table.title = "Likelihood estimator of lambda: simulated vs Fisher std (lambda=10, p1=0.4, p2=0.7)";
      table.columns = {"M", "std_sim", "std_app", "failures"};
      const FisherMatrix fisher = fisher_information(params);
      for (std::size_t m : kSizes) {
        const StudyReport r = study(m, {Method::Mle});
        const MethodSummary& s = r.methods.front();
        table.rows.push_back({static_cast<double>(m), s.std.lambda,
                              std::sqrt(mle_asymptotic_variance(fisher, m).lambda),
                              static_cast<double>(s.failure_total())});
      }
      break;
    }
    case TableId::T3: {
      table.title = "Moment vs likelihood estimators of lambda (lambda=10, p1=0.4, p2=0.7)";
      table.columns = {"M",          "mean_moment", "mean_ml",         "std_moment",
                       "std_ml",     "pct_ml_better", "moment_failures", "ml_failures"};
      for (std::size_t m : kSizes) {
        const StudyReport r = study(m, {Method::Moment, Method::Mle});
        const MethodSummary& mom = *r.find(Method::Moment);
        const MethodSummary& mle = *r.find(Method::Mle);
        table.rows.push_back({static_cast<double>(m), mom.mean.lambda, mle.mean.lambda, mom.std.lambda,
                              mle.std.lambda, 100.0 * r.head_to_head->fraction,
                              static_cast<double>(mom.failure_total()), static_cast<double>(mle.failure_total())});
      }
      break;
    }
  }
  return table;
}

}  // namespace dualinspect
