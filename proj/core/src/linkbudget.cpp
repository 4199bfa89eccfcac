#include "hetsim/linkbudget.hpp"

#include <cmath>
#include <stdexcept>

namespace hetsim::linkbudget {

namespace {
constexpr double kSpeedOfLight = 299792458.0;  // m/s
}

double friis_rx_power_w(double p_t_w, double g_t_linear, double g_r_linear,
                        double f0_hz, double d_m) {
  if (p_t_w <= 0.0 || g_t_linear <= 0.0 || g_r_linear <= 0.0) {
    throw std::invalid_argument("friis_rx_power: powers and gains must be > 0");
  }
  if (d_m <= 0.0 || f0_hz <= 0.0) {
    throw std::invalid_argument("friis_rx_power: distance and frequency must be > 0");
  }
  const double factor = kSpeedOfLight / (4.0 * M_PI * d_m * f0_hz);
  return factor * factor * g_r_linear * g_t_linear * p_t_w;
}

double coverage_radius_m(const ScalingParams& params, const ScalingReference& ref) {
  if (params.f0_hz <= 0.0 || ref.f_ref_hz <= 0.0 || ref.d_ref_m <= 0.0) {
    throw std::invalid_argument("coverage_radius: positive anchors required");
  }
  const double freq_ratio = ref.f_ref_hz / params.f0_hz;
  switch (params.gain_scaling) {
    case GainScaling::fixed:
      if (params.beta <= 0.0) throw std::invalid_argument("coverage_radius: beta must be > 0");
      return ref.d_ref_m * std::pow(freq_ratio, 3.0 / params.beta);
    case GainScaling::linear_array:
      return ref.d_ref_m * freq_ratio;
    case GainScaling::planar_array:
      return ref.d_ref_m * std::sqrt(freq_ratio);
  }
  throw std::invalid_argument("coverage_radius: invalid gain-scaling mode");
}

UserRateScaling user_rate_scaling(const ScalingParams& params, const ScalingReference& ref) {
  if (params.f0_hz <= 0.0 || ref.f_ref_hz <= 0.0 || ref.d_ref_m <= 0.0) {
    throw std::invalid_argument("user_rate_scaling: positive anchors required");
  }
  // d0 = chi / f0, anchored so d0(f_ref) = d_ref.
  const double chi = ref.d_ref_m * ref.f_ref_hz;
  UserRateScaling out;
  out.d0_m = chi / params.f0_hz;
  out.n_ue = M_PI * out.d0_m * out.d0_m * params.eta_users_per_m2;
  out.c_ue_bps = params.fractional_bandwidth * std::log2(1.0 + params.gamma0) /
                 (M_PI * params.eta_users_per_m2 * chi * chi) * std::pow(params.f0_hz, 3.0);
  return out;
}

double array_budget_gain_db(int n_tx, int n_rx) {
  if (n_tx < 1 || n_rx < 1) {
    throw std::invalid_argument("array_budget_gain: element counts must be >= 1");
  }
  return 10.0 *
         std::log10(static_cast<double>(n_tx) * n_tx * static_cast<double>(n_rx));
}

double distance_ratio_from_gain(double gain_db, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("distance_ratio: beta must be > 0");
  return std::pow(10.0, gain_db / (10.0 * beta));
}

}  // namespace hetsim::linkbudget
