#pragma once

#include "hetsim/rng.hpp"

namespace hetsim::traffic {

// Biased-Gamma instantaneous per-user traffic demand: bias + Gamma(k, theta),
// with theta recomputed so the mean hits a target scenario value. The shape
// parameter is the one fitted to measured dense-urban traffic and is held
// fixed across scenarios.
struct DemandProfile {
  double shape_k = 0.2892;
  double scale_theta = 0.0;   // bps
  double bias = 4000.0;       // bps
  double target_mean = 0.0;   // bps

  double analytic_mean() const { return shape_k * scale_theta + bias; }
  double analytic_variance() const { return shape_k * scale_theta * scale_theta; }
};

// theta = (target_mean - bias) / shape_k. Throws std::invalid_argument when
// target_mean <= bias (no nonnegative theta exists) or shape_k <= 0.
DemandProfile calibrate(double shape_k, double bias_bps, double target_mean_bps);

// One demand draw, strictly >= bias.
double sample_demand(const DemandProfile& profile, rng::Xoshiro256pp& gen);

// CDF of the biased demand at value x (bps).
double demand_cdf(const DemandProfile& profile, double x);

// Inverse CDF: bias + theta * P^-1(k, p). p in [0, 1).
double demand_quantile(const DemandProfile& profile, double p);

}  // namespace hetsim::traffic
