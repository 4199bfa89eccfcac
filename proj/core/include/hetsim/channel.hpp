#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "hetsim/band.hpp"
#include "hetsim/geometry.hpp"
#include "hetsim/rng.hpp"

namespace hetsim::channel {

enum class AntennaPattern { sector_3gpp, omni, steered_beam };

// Per-band radio parameters. Defaults follow the evaluation scenario:
// 2 GHz / 3.5 GHz / 60 GHz with 10 MHz / 100 MHz / 2 GHz bandwidth,
// 46 / 30 / 10 dBm transmit power and 17 / 5 / 25 dBi peak gain.
struct BandParams {
  Band band_id = Band::macro_2g;
  double center_frequency_hz = 2.0e9;
  double bandwidth_hz = 10.0e6;
  double tx_power_dbm = 46.0;
  double max_antenna_gain_dbi = 17.0;
  double bs_height_m = 25.0;
  int n_bs_antennas = 4;
  int n_ue_antennas = 2;
  AntennaPattern pattern = AntennaPattern::sector_3gpp;
  double noise_density_dbm_hz = -174.0;
  double noise_figure_db = 0.0;
  double ue_antenna_gain_dbi = 0.0;
};

BandParams default_band_params(Band band);

// Receiver noise power over the band's bandwidth, in mW.
double noise_power_mw(const BandParams& band);

// dB plumbing.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// Path loss in dB. Macro and 3.5 GHz use the standard log-distance models
// (d in km); 60 GHz uses the measured street-level model with its two
// branches around the 5 m reference distance (82.02 dB intercept, slope
// 23.6 above / 20 below), extrapolated beyond the 50 m fit range. The
// optional additive term (dB/km, 60 GHz only) covers atmospheric absorption
// studies and defaults to off.
double path_loss_db(Band band, double distance_m, double extra_60g_db_per_km = 0.0);

// Distance-dependent Rician parameters of the 60 GHz fading fit:
// K(d) = -0.62 d + 25 dB (returned linear), Omega(d) = 0.013 d + 1.
struct RicianParams {
  double k_factor = 0.0;  // linear power ratio
  double omega = 1.0;     // mean power, normalized to mean path loss
};

RicianParams rician_params(double distance_m);

// Small-scale fading matrix, entries normalized to the mean path loss.
struct ChannelMatrix {
  int n_rx = 0;
  int n_tx = 0;
  std::vector<std::complex<double>> entries;  // row-major

  std::complex<double>& at(int r, int c) { return entries[r * n_tx + c]; }
  const std::complex<double>& at(int r, int c) const { return entries[r * n_tx + c]; }
};

enum class FadingKind { rayleigh, rician };

// Rayleigh: i.i.d. CN(0, 1) entries. Rician: fixed-phase line-of-sight
// component of power omega*K/(1+K) plus CN(0, omega/(1+K)) scatter, so
// E[|h|^2] = omega entry-wise.
ChannelMatrix draw_channel(FadingKind kind, int n_rx, int n_tx,
                           const std::optional<RicianParams>& rician,
                           rng::Xoshiro256pp& gen);

// 3GPP sector pattern: A(theta) = -min(12 (theta/70)^2, 25) dB relative to
// boresight; absolute gain is 17 dBi + A(theta).
double sector_gain_rel_db(double azimuth_offset_deg);
double sector_gain_dbi(double azimuth_offset_deg);

struct Boresight {
  double azimuth_deg = 0.0;    // multiple of 15 in [0, 360)
  double elevation_deg = 0.0;  // multiple of 15 in [-90, 90]
};

// Beam steering grid: both angles rounded to the nearest 15 deg step, ties
// toward zero; azimuth wrapped to [0, 360), elevation clamped to [-90, 90].
Boresight quantize_boresight(double azimuth_deg, double elevation_deg);

// Gaussian main-lobe steered-beam pattern with aperture-derived beamwidth
// psi_3dB = sqrt(41253 / 10^(G_max/10)) (symmetric az/el) and a -10 dBi
// side-lobe floor. psi is the 3D angle between boresight and target.
double beam_psi_3db_deg(double g_max_dbi);
double beam_gain_dbi(const Boresight& boresight, double target_azimuth_deg,
                     double target_elevation_deg, double g_max_dbi = 25.0);

// 3D angle (degrees) between two (azimuth, elevation) directions.
double angle_between_deg(double az1_deg, double el1_deg, double az2_deg, double el2_deg);

// Link budget: P_r[dBm] = tx_power + tx_gain + rx_gain - pl, returned in mW.
double rx_power_mw(const BandParams& band, double path_loss_db, double tx_gain_db,
                   double rx_gain_db);

// Interference summations over co-band non-serving transmitters. Shadowing
// (dB, one entry per interferer, may be empty for none) is already drawn by
// the caller so the sums stay pure.

struct SectorInterferer {
  geom::Position position;
  double boresight_azimuth_deg = 0.0;
};

double sector_interference_mw(const BandParams& band, const geom::Position& ue,
                              std::span<const SectorInterferer> sectors,
                              std::span<const double> shadowing_db);

double omni_interference_mw(const BandParams& band, const geom::Position& ue,
                            std::span<const geom::Position> interferers,
                            std::span<const double> shadowing_db);

// A 60 GHz interferer transmits toward its own scheduled UEs; `draws` holds
// the quantized boresights of the averaging realizations (empty = idle cell).
struct BeamInterferer {
  geom::Position position;
  std::vector<Boresight> draws;
};

double beam_interference_mw(const BandParams& band, const geom::Position& ue,
                            std::span<const BeamInterferer> interferers,
                            std::span<const double> shadowing_db);

// Open-loop MIMO link spectral efficiency with interference treated as white
// noise: log2 det(I + (rho / n_tx) H H^H), rho = signal / (interference+noise),
// equal power per transmit antenna. Throws on a non-positive denominator.
double spectral_efficiency(const ChannelMatrix& h, double signal_mw,
                           double interference_plus_noise_mw, int n_tx,
                           double cap_bps_hz = 0.0);  // cap <= 0 means uncapped

// Per-link quality snapshot; sinr is computed once at construction.
struct LinkQuality {
  double path_loss_db = 0.0;
  double tx_antenna_gain_db = 0.0;
  double rx_antenna_gain_db = 0.0;
  double signal_power_mw = 0.0;
  double interference_power_mw = 0.0;
  double noise_power_mw = 0.0;
  double sinr = 0.0;  // linear
  double spectral_efficiency_bps_hz = 0.0;
};

LinkQuality make_link_quality(double path_loss_db, double tx_gain_db, double rx_gain_db,
                              double signal_mw, double interference_mw, double noise_mw,
                              double se_bps_hz);

}  // namespace hetsim::channel
