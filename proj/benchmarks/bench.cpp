#include <benchmark/benchmark.h>

#include "recsim/dynamics.hpp"
#include "recsim/metrics.hpp"
#include "recsim/recommend.hpp"
#include "recsim/state.hpp"

using namespace recsim;

namespace {

SimulationState warmed(Strategy strategy, std::size_t n) {
  SimParams p;
  p.n = n;
  p.opinions_per_round = n;
  p.total_opinions = n * 30;
  p.strategy = strategy;
  p.seed = 3;
  SimulationState st = init_network(p);
  for (int r = 0; r < 3; ++r) run_round(st);
  return st;
}

void BM_RunRound(benchmark::State& bm) {
  const auto strategy = static_cast<Strategy>(bm.range(0));
  const SimulationState start = warmed(strategy, static_cast<std::size_t>(bm.range(1)));
  for (auto _ : bm) {
    bm.PauseTiming();
    SimulationState st = start;
    bm.ResumeTiming();
    benchmark::DoNotOptimize(run_round(st));
  }
  bm.SetLabel(std::string(to_string(strategy)));
}
BENCHMARK(BM_RunRound)
    ->ArgsProduct({{0, 1, 2, 3, 4, 5}, {50, 100}})
    ->Unit(benchmark::kMicrosecond);

/// Warmed state with a freshly generated round pool.
SimulationState with_pool(Strategy strategy, std::size_t n) {
  SimulationState st = warmed(strategy, n);
  for (std::size_t i = 0; i < st.params.opinions_per_round; ++i)
    generate_opinion(st, st.rng.below(st.agents.size()));
  return st;
}

void BM_Recommend(benchmark::State& bm) {
  const auto strategy = static_cast<Strategy>(bm.range(0));
  const SimulationState st = with_pool(strategy, 100);
  AgentId user = 0;
  for (auto _ : bm) {
    benchmark::DoNotOptimize(recommend(st, user));
    user = (user + 1) % st.agents.size();
  }
  bm.SetLabel(std::string(to_string(strategy)));
}
BENCHMARK(BM_Recommend)->DenseRange(0, 5)->Unit(benchmark::kMicrosecond);

void BM_ComputeUpdate(benchmark::State& bm) {
  const auto strategy = static_cast<Strategy>(bm.range(0));
  const SimulationState st = with_pool(strategy, 100);
  for (auto _ : bm) benchmark::DoNotOptimize(compute_round_update(st));
  bm.SetLabel(std::string(to_string(strategy)));
}
BENCHMARK(BM_ComputeUpdate)->DenseRange(0, 5)->Unit(benchmark::kMicrosecond);

void BM_Louvain(benchmark::State& bm) {
  const SimulationState st = warmed(Strategy::NO, static_cast<std::size_t>(bm.range(0)));
  const auto graph = UndirectedWeightedGraph::from_weights(st.weights);
  for (auto _ : bm) {
    RngStream rng(7);
    benchmark::DoNotOptimize(louvain(graph, rng));
  }
}
BENCHMARK(BM_Louvain)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_RoundMetrics(benchmark::State& bm) {
  const SimulationState st = warmed(Strategy::SC, 100);
  for (auto _ : bm) benchmark::DoNotOptimize(record_round_metrics(st));
}
BENCHMARK(BM_RoundMetrics)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
