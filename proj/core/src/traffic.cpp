#include "hetsim/traffic.hpp"

#include <stdexcept>

#include "hetsim/gammafn.hpp"

namespace hetsim::traffic {

DemandProfile calibrate(double shape_k, double bias_bps, double target_mean_bps) {
  if (shape_k <= 0.0) throw std::invalid_argument("calibrate: shape_k must be > 0");
  if (bias_bps < 0.0) throw std::invalid_argument("calibrate: bias must be >= 0");
  if (target_mean_bps <= bias_bps) {
    throw std::invalid_argument("calibrate: target mean must exceed the traffic bias");
  }
  DemandProfile profile;
  profile.shape_k = shape_k;
  profile.bias = bias_bps;
  profile.target_mean = target_mean_bps;
  profile.scale_theta = (target_mean_bps - bias_bps) / shape_k;
  return profile;
}

double sample_demand(const DemandProfile& profile, rng::Xoshiro256pp& gen) {
  return profile.bias + gen.gamma(profile.shape_k, profile.scale_theta);
}

double demand_cdf(const DemandProfile& profile, double x) {
  if (x <= profile.bias) return 0.0;
  return math::gamma_p(profile.shape_k, (x - profile.bias) / profile.scale_theta);
}

double demand_quantile(const DemandProfile& profile, double p) {
  if (p < 0.0 || p >= 1.0) {
    throw std::invalid_argument("demand_quantile: p must be in [0, 1)");
  }
  if (p == 0.0) return profile.bias;
  return profile.bias + profile.scale_theta * math::gamma_p_inv(profile.shape_k, p);
}

}  // namespace hetsim::traffic
