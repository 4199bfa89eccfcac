#pragma once

namespace hetsim::linkbudget {

// How the transmit antenna gain scales with carrier frequency for the
// coverage law: fixed gain, linear array (G ~ f0), or planar array (G ~ f0^2).
enum class GainScaling { fixed, linear_array, planar_array };

struct ScalingParams {
  double f0_hz = 2.0e9;
  double fractional_bandwidth = 0.01;  // B = alpha * f0
  double beta = 2.0;                   // path-loss exponent (fixed-gain mode)
  double gamma0 = 1.0;                 // minimum SNR, linear
  double eta_users_per_m2 = 1.0e-4;
  GainScaling gain_scaling = GainScaling::fixed;
};

// Anchor for the ratio laws; the proportionality constants are never given
// numerically, so every output is pinned to a user-supplied reference point.
struct ScalingReference {
  double f_ref_hz = 2.0e9;
  double d_ref_m = 1000.0;
};

// Free-space received power: P_r = (c / (4 pi d f0))^2 G_r G_t P_t, in watts.
double friis_rx_power_w(double p_t_w, double g_t_linear, double g_r_linear,
                        double f0_hz, double d_m);

// Coverage radius at f0, anchored at (f_ref, d_ref):
//   fixed gains:  d0 = d_ref (f_ref/f0)^(3/beta)
//   linear array: d0 = d_ref (f_ref/f0)        (beta = 2 with G_t ~ f0)
//   planar array: d0 = d_ref (f_ref/f0)^(1/2)
double coverage_radius_m(const ScalingParams& params, const ScalingReference& ref);

// Per-user rate under the d0 = chi/f0 coverage law with B = alpha f0 and
// edge SNR pinned at gamma0: C_UE = alpha log2(1+gamma0) / (pi eta chi^2) f0^3.
struct UserRateScaling {
  double d0_m = 0.0;     // chi / f0 coverage at f0
  double n_ue = 0.0;     // pi d0^2 eta users in coverage
  double c_ue_bps = 0.0; // per-user rate
};

UserRateScaling user_rate_scaling(const ScalingParams& params, const ScalingReference& ref);

// Phased-array link-budget increase: 10 log10(n_tx^2 * n_rx) dB.
double array_budget_gain_db(int n_tx, int n_rx);

// Communication-distance ratio bought by a budget increase of gain_db under
// path-loss exponent beta (free space by default): 10^(gain / (10 beta)).
double distance_ratio_from_gain(double gain_db, double beta = 2.0);

}  // namespace hetsim::linkbudget
