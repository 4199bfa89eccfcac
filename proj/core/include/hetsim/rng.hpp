#pragma once

#include <cstdint>
#include <initializer_list>

namespace hetsim::rng {

// SplitMix64 step (Steele, Lea, Flood 2014). Used for seed mixing and for
// expanding one 64-bit key into engine state.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic 64-bit mix of an ordered key tuple. Every stochastic consumer
// (deployment, shadowing, fading, demands, interferer beams) derives its seed
// as mix_key({base_seed, drop_index, stream_label, entity_a, entity_b}), which
// makes all draws independent of evaluation order and thread schedule.
constexpr std::uint64_t mix_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t p : parts) {
    std::uint64_t s = p ^ h;
    h ^= splitmix64(s);
    h = h * 0x2545f4914f6cdd1dULL + 0x9e3779b97f4a7c15ULL;
  }
  return h;
}

// Named substreams; numeric values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
  deployment = 1,
  shadowing = 2,
  fading = 3,
  demand = 4,
  beam_draw = 5,
};

// xoshiro256++ 1.0 (Blackman & Vigna). Self-contained so results never depend
// on a particular C++ standard library implementation.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Rejection keeps the distribution exact.
  std::uint64_t uniform_index(std::uint64_t n);

  // Standard normal via Box-Muller; second variate of each pair is cached.
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  // Gamma(shape, scale) via Marsaglia-Tsang, with the boost-to-shape<1 trick.
  double gamma(double shape, double scale);

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace hetsim::rng
