#include <benchmark/benchmark.h>

#include "dualinspect/fisher.hpp"
#include "dualinspect/mle.hpp"
#include "dualinspect/model.hpp"
#include "dualinspect/moment.hpp"
#include "dualinspect/simulation.hpp"

namespace di = dualinspect;

namespace {

const di::ModelParams kRef(10, 0.4, 0.7);

void BM_LogPmf(benchmark::State& state) {
  const auto r = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(di::log_pmf(kRef, {r, r + 2}));
}
BENCHMARK(BM_LogPmf)->Arg(2)->Arg(8)->Arg(32);

void BM_SampleCounts(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(di::sample_counts(kRef, static_cast<std::size_t>(state.range(0)), {seed++}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleCounts)->Arg(100)->Arg(10000);

void BM_EstimateMoment(benchmark::State& state) {
  const auto s = di::sample_counts(kRef, static_cast<std::size_t>(state.range(0)), {1});
  for (auto _ : state) benchmark::DoNotOptimize(di::estimate_moment(s));
}
BENCHMARK(BM_EstimateMoment)->Arg(100)->Arg(500);

void BM_SolveMle(benchmark::State& state) {
  const auto s = di::sample_counts(kRef, static_cast<std::size_t>(state.range(0)), {1});
  for (auto _ : state) benchmark::DoNotOptimize(di::solve_mle(s));
}
BENCHMARK(BM_SolveMle)->Arg(100)->Arg(500)->Arg(5000);

void BM_FisherInformation(benchmark::State& state) {
  const di::ModelParams p(static_cast<double>(state.range(0)), 0.4, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(di::fisher_information(p));
}
BENCHMARK(BM_FisherInformation)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_StudyReplicate(benchmark::State& state) {
  di::StudyConfig cfg;
  cfg.m = 200;
  cfg.replicates = 100;
  cfg.methods = {di::Method::Moment, di::Method::Mle};
  for (auto _ : state) {
    benchmark::DoNotOptimize(di::run_study(cfg));
    ++cfg.seed.value;
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_StudyReplicate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
