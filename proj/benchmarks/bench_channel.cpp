#include <benchmark/benchmark.h>

#include "hetsim/channel.hpp"
#include "hetsim/rng.hpp"

namespace {

void BM_PathLoss60(benchmark::State& state) {
  double d = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hetsim::channel::path_loss_db(hetsim::Band::small_60g, d));
    d = d < 200.0 ? d + 0.25 : 1.0;
  }
}
BENCHMARK(BM_PathLoss60);

void BM_DrawRicianChannel(benchmark::State& state) {
  hetsim::rng::Xoshiro256pp gen(3);
  const auto rp = hetsim::channel::rician_params(25.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hetsim::channel::draw_channel(hetsim::channel::FadingKind::rician, 2, 1, rp, gen));
  }
}
BENCHMARK(BM_DrawRicianChannel);

void BM_SpectralEfficiency2x4(benchmark::State& state) {
  hetsim::rng::Xoshiro256pp gen(5);
  const auto h = hetsim::channel::draw_channel(hetsim::channel::FadingKind::rayleigh, 2, 4,
                                               std::nullopt, gen);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hetsim::channel::spectral_efficiency(h, 10.0, 1.0, 4));
  }
}
BENCHMARK(BM_SpectralEfficiency2x4);

void BM_BeamGain(benchmark::State& state) {
  const hetsim::channel::Boresight bore{45.0, -15.0};
  double az = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hetsim::channel::beam_gain_dbi(bore, az, -10.0));
    az = az < 360.0 ? az + 0.1 : 0.0;
  }
}
BENCHMARK(BM_BeamGain);

}  // namespace
