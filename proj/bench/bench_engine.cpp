// Parallel engine vs the serial reference evaluation on the same runs.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "cyclemr/engine.hpp"
#include "cyclemr/reference.hpp"
#include "cyclemr/verifier.hpp"

using namespace cyclemr;

namespace {

constexpr std::uint32_t kRounds = 30;

void BM_Engine(benchmark::State& state) {
  const auto n = static_cast<PointId>(state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  const auto inst = random_one_cycle(n, 1);
  const auto cfg = make_config(n, 0.5, 2, 1);
  const auto strategy = make_endpoint_hash(1);
  RunOptions ro;
  ro.rounds = kRounds;
  ro.stop_on_decision = false;
  for (auto _ : state) benchmark::DoNotOptimize(run(inst, *strategy, cfg, ro));
  state.SetItemsProcessed(state.iterations() * kRounds);
}

void BM_Reference(benchmark::State& state) {
  const auto n = static_cast<PointId>(state.range(0));
  const auto inst = random_one_cycle(n, 1);
  const auto cfg = make_config(n, 0.5, 2, 1);
  const auto strategy = make_endpoint_hash(1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::run(inst, *strategy, cfg, {}, kRounds, false));
  state.SetItemsProcessed(state.iterations() * kRounds);
}

void BM_ReduceSet(benchmark::State& state) {
  const auto n = static_cast<PointId>(state.range(0));
  const auto inst = random_one_cycle(n, 2);
  PathSet ps;
  for (PointId id = 0; id <= n; id += 2) ps.push_back(Path::run(inst, id, 3));
  for (auto _ : state) benchmark::DoNotOptimize(reduce_set(ps, {1, 0}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ps.size()));
}

void BM_InvarianceExhaustive(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const auto cfg = make_config(8, 0.5, 2, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        check_invariance_exhaustive("id-block", strategy_factory("id-block"), cfg, MarginProfile::nested));
  }
}

}  // namespace

BENCHMARK(BM_Engine)->ArgsProduct({{1 << 10, 1 << 12, 1 << 14}, {1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reference)->Arg(1 << 10)->Arg(1 << 12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReduceSet)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_InvarianceExhaustive)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
