#include <benchmark/benchmark.h>

#include <random>

#include "dersim/attacks.hpp"
#include "dersim/cyber_graph.hpp"
#include "dersim/engine.hpp"
#include "dersim/mca.hpp"
#include "dersim/scenario.hpp"

using namespace dersim;

static void BM_SimulateScenario(benchmark::State& state, const char* name, bool mca) {
  ScenarioConfig cfg = LoadBuiltin(name);
  cfg.mca.enabled = mca;
  for (auto _ : state) benchmark::DoNotOptimize(Simulate(cfg));
  state.counters["steps/s"] = benchmark::Counter(
      static_cast<double>(cfg.n_steps() + std::lround(cfg.warmup / cfg.dt)),
      benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK_CAPTURE(BM_SimulateScenario, attack_free_k5, "attack-free-k5", false)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SimulateScenario, la_69_mca, "la-69", true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SimulateScenario, la_dropout_69, "la-dropout-69", false)
    ->Unit(benchmark::kMillisecond);

static void BM_MaxEigenvalue(benchmark::State& state) {
  const auto lv = Laplacian(CyberGraph::Chain(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(MaxLaplacianEigenvalue(lv));
}
BENCHMARK(BM_MaxEigenvalue)->Arg(5)->Arg(9)->Arg(32);

static void BM_McaStep(benchmark::State& state) {
  McaParams p;
  p.enabled = true;
  McaState ms(p);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  long k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        McaStep(ms, p, {k, k * 1e-3, {nd(rng), nd(rng)}, {nd(rng), nd(rng)}, true, k * 1e-3}));
    ++k;
  }
}
BENCHMARK(BM_McaStep);

static void BM_PipelineRoundTrip(benchmark::State& state) {
  AttackSpec lat;
  lat.kind = AttackKind::kLatency;
  lat.tau = 0.05;
  AttackSpec drop;
  drop.kind = AttackKind::kDropout;
  drop.p = 0.1;
  AttackPipeline pl(2, {lat, drop}, 7, 1e-3);
  long k = 0;
  for (auto _ : state) {
    pl.Send({0, 1, {}, k * 1e-3, k});
    benchmark::DoNotOptimize(pl.Deliver(0, 1, k));
    ++k;
  }
}
BENCHMARK(BM_PipelineRoundTrip);

BENCHMARK_MAIN();
