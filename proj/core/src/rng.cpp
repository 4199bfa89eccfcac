#include "hetsim/rng.hpp"

#include <cmath>

namespace hetsim::rng {

std::uint64_t Xoshiro256pp::uniform_index(std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t x = (*this)();
  while (x >= limit) x = (*this)();
  return x % n;
}

double Xoshiro256pp::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller; u1 is kept away from 0 so the log stays finite.
  double u1 = uniform();
  while (u1 <= 0x1.0p-60) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

double Xoshiro256pp::gamma(double shape, double scale) {
  if (shape < 1.0) {
    // Boosting: X ~ Gamma(shape+1), X * U^(1/shape) ~ Gamma(shape).
    const double boosted = gamma(shape + 1.0, 1.0);
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return scale * boosted * std::pow(u, 1.0 / shape);
  }
  // Marsaglia & Tsang (2000) squeeze method.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return scale * d * v;
    }
  }
}

}  // namespace hetsim::rng
