#include <vector>

#include <benchmark/benchmark.h>

#include "eec/chain.hpp"
#include "eec/coverage.hpp"
#include "eec/montecarlo.hpp"

using namespace eec;

namespace {

CoverageQuery table1_query(Selection sel) {
  const Preset p = table1_preset();
  return {p.radio, p.deploy, sel};
}

void BM_SuccessRandom(benchmark::State& state) {
  const CoverageQuery q = table1_query(Selection::random());
  for (auto _ : state) benchmark::DoNotOptimize(success_probability_random(q));
}
BENCHMARK(BM_SuccessRandom)->Unit(benchmark::kMillisecond);

void BM_RankedTable(benchmark::State& state) {
  const CoverageQuery q = table1_query(Selection::ranked(1));
  const auto k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ranked_success_table(k, q));
}
BENCHMARK(BM_RankedTable)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_MeanDelay(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const std::vector<double> rates(static_cast<std::size_t>(n), 0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mean_absorption_time(build_level_dependent(n, rates, 0.02)).mean_delay_s);
  }
}
BENCHMARK(BM_MeanDelay)->Arg(8)->Arg(50)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_FailureChainDelay(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const std::vector<double> rates(static_cast<std::size_t>(n), 0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mean_absorption_time(build_failure_chain(n, rates, 0.02, 3.0, 2)).mean_delay_s);
  }
}
BENCHMARK(BM_FailureChainDelay)->Arg(8)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_NetworkDraw(benchmark::State& state) {
  const Preset p = table1_preset();
  const double arena = default_arena_radius(p.radio, p.deploy);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_network(++seed, p.deploy, p.radio, arena));
}
BENCHMARK(BM_NetworkDraw)->Unit(benchmark::kMicrosecond);

void BM_EmpiricalSuccess(benchmark::State& state) {
  SimConfig sim;
  sim.replications = 1000;
  sim.threads = 1;
  const CoverageQuery q = table1_query(Selection::random());
  for (auto _ : state) benchmark::DoNotOptimize(empirical_success_probability(sim, q));
}
BENCHMARK(BM_EmpiricalSuccess)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
  const ChainModel m = build_failure_chain(8, std::vector<double>(8, 0.8), 0.02, 3.0, std::nullopt);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_task_trajectory(++seed, m));
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
