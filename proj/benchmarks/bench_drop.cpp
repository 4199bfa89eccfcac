#include <benchmark/benchmark.h>

#include "hetsim/config.hpp"
#include "hetsim/sim.hpp"

namespace {

void BM_RunDrop(benchmark::State& state) {
  hetsim::SimConfig config = hetsim::desk_preset();
  config.deployment.n_ue = static_cast<int>(state.range(0));
  hetsim::sim::DropSpec spec;
  spec.n_small_60g = static_cast<int>(state.range(1));
  spec.traffic_mean_bps = 64.0e6;
  int drop = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hetsim::sim::run_drop(config, spec, drop++));
  }
}
BENCHMARK(BM_RunDrop)
    ->Args({100, 10})
    ->Args({500, 20})
    ->Args({500, 100})
    ->Unit(benchmark::kMillisecond);

void BM_BuildDropLinks(benchmark::State& state) {
  hetsim::SimConfig config = hetsim::desk_preset();
  config.deployment.n_ue = 500;
  hetsim::sim::DropSpec spec;
  spec.n_small_60g = static_cast<int>(state.range(0));
  spec.traffic_mean_bps = 64.0e6;
  int drop = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hetsim::sim::build_drop_links(config, spec, drop++));
  }
}
BENCHMARK(BM_BuildDropLinks)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
