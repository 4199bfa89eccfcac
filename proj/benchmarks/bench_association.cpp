#include <benchmark/benchmark.h>

#include <cmath>

#include "hetsim/association.hpp"
#include "hetsim/rng.hpp"

namespace {

hetsim::assoc::SubProblem make_subproblem(int n_users, std::uint64_t seed) {
  hetsim::rng::Xoshiro256pp gen(seed);
  hetsim::assoc::SubProblem sp;
  sp.alpha_s = 0.3;
  sp.w_macro_hz = 10e6;
  sp.w_small_hz = 2e9;
  for (int u = 0; u < n_users; ++u) {
    sp.ues.push_back({u, gen.uniform(0.2, 6.0), gen.uniform(0.0, 7.0),
                      std::pow(10.0, gen.uniform(4.0, 9.0))});
  }
  return sp;
}

void BM_SolveSubproblem(benchmark::State& state) {
  const auto sp = make_subproblem(static_cast<int>(state.range(0)), 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hetsim::assoc::solve_subproblem(sp));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveSubproblem)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_BruteForceSubproblem(benchmark::State& state) {
  const auto sp = make_subproblem(static_cast<int>(state.range(0)), 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hetsim::assoc::brute_force_subproblem(sp));
  }
}
BENCHMARK(BM_BruteForceSubproblem)->DenseRange(4, 16, 4);

void BM_TopkSelect(benchmark::State& state) {
  hetsim::rng::Xoshiro256pp gen(7);
  std::vector<double> f(state.range(0));
  for (auto& v : f) v = gen.uniform(-1.0, 1.0);
  const int k = static_cast<int>(f.size() / 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hetsim::assoc::topk_select(f, k));
  }
}
BENCHMARK(BM_TopkSelect)->Range(16, 4096);

}  // namespace
