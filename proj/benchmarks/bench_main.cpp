#include <benchmark/benchmark.h>

#include "fragsim/analytic.hpp"
#include "fragsim/rng.hpp"
#include "fragsim/simulator.hpp"

namespace {

void BM_SurvivalKn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double t = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fragsim::analytic::survival_Kn(0.5, n, t));
    t = t < 8.0 ? t + 0.25 : 0.5;
  }
}
BENCHMARK(BM_SurvivalKn)->Arg(5)->Arg(20)->Arg(80);

void BM_PhiInf(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(fragsim::analytic::phi_inf(0.8));
  }
}
BENCHMARK(BM_PhiInf);

void BM_BrwSweep(benchmark::State& state) {
  const fragsim::ModelParams params(2, 1.0);
  const int n_max = static_cast<int>(state.range(0));
  std::uint64_t replica = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fragsim::brw_sweep(params, n_max, {1, replica++}));
  }
  state.SetItemsProcessed(state.iterations() * ((2LL << n_max) - 1));
}
BENCHMARK(BM_BrwSweep)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Gillespie(benchmark::State& state) {
  const fragsim::ModelParams params(2, 1.0);
  const double t_end = static_cast<double>(state.range(0));
  std::uint64_t replica = 0;
  std::uint64_t events = 0;
  for (auto _ : state) {
    const auto traj = fragsim::gillespie_run(params, t_end, {2, replica++});
    events += traj.events;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(events));
}
BENCHMARK(BM_Gillespie)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
