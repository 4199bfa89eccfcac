#include "hetsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hetsim::channel {

namespace {
constexpr double kRadPerDeg = M_PI / 180.0;
}

BandParams default_band_params(Band band) {
  BandParams p;
  p.band_id = band;
  switch (band) {
    case Band::macro_2g:
      p.center_frequency_hz = 2.0e9;
      p.bandwidth_hz = 10.0e6;
      p.tx_power_dbm = 46.0;
      p.max_antenna_gain_dbi = 17.0;
      p.bs_height_m = 25.0;
      p.n_bs_antennas = 4;
      p.n_ue_antennas = 2;
      p.pattern = AntennaPattern::sector_3gpp;
      break;
    case Band::small_3g5:
      p.center_frequency_hz = 3.5e9;
      p.bandwidth_hz = 100.0e6;
      p.tx_power_dbm = 30.0;
      p.max_antenna_gain_dbi = 5.0;
      p.bs_height_m = 10.0;
      p.n_bs_antennas = 4;
      p.n_ue_antennas = 2;
      p.pattern = AntennaPattern::omni;
      break;
    case Band::small_60g:
      p.center_frequency_hz = 60.0e9;
      p.bandwidth_hz = 2.0e9;
      p.tx_power_dbm = 10.0;
      p.max_antenna_gain_dbi = 25.0;
      p.bs_height_m = 3.0;
      p.n_bs_antennas = 1;
      p.n_ue_antennas = 2;
      p.pattern = AntennaPattern::steered_beam;
      break;
  }
  return p;
}

double noise_power_mw(const BandParams& band) {
  const double dbm = band.noise_density_dbm_hz + 10.0 * std::log10(band.bandwidth_hz) +
                     band.noise_figure_db;
  return dbm_to_mw(dbm);
}

double path_loss_db(Band band, double distance_m, double extra_60g_db_per_km) {
  if (distance_m <= 0.0) throw std::invalid_argument("path_loss: distance must be > 0");
  switch (band) {
    case Band::macro_2g:
      return 128.1 + 37.6 * std::log10(distance_m / 1000.0);
    case Band::small_3g5:
      return 140.7 + 36.7 * std::log10(distance_m / 1000.0);
    case Band::small_60g: {
      constexpr double d_ref = 5.0;
      const double slope = distance_m >= d_ref ? 23.6 : 20.0;
      const double pl = 82.02 + slope * std::log10(distance_m / d_ref);
      return pl + extra_60g_db_per_km * distance_m / 1000.0;
    }
  }
  throw std::invalid_argument("path_loss: unknown band");
}

RicianParams rician_params(double distance_m) {
  if (distance_m < 0.0) throw std::invalid_argument("rician_params: distance must be >= 0");
  RicianParams p;
  const double k_db = -0.62 * distance_m + 25.0;
  p.k_factor = std::max(0.0, db_to_linear(k_db));  // guards underflow at huge d
  p.omega = 0.013 * distance_m + 1.0;
  return p;
}

ChannelMatrix draw_channel(FadingKind kind, int n_rx, int n_tx,
                           const std::optional<RicianParams>& rician,
                           rng::Xoshiro256pp& gen) {
  if (n_rx < 1 || n_tx < 1) throw std::invalid_argument("draw_channel: bad dimensions");
  if (kind == FadingKind::rician && !rician.has_value()) {
    throw std::invalid_argument("draw_channel: rician params required");
  }
  ChannelMatrix h;
  h.n_rx = n_rx;
  h.n_tx = n_tx;
  h.entries.resize(static_cast<std::size_t>(n_rx) * n_tx);

  double los_amplitude = 0.0;
  double scatter_sigma = M_SQRT1_2;  // per real dimension, unit total power
  if (kind == FadingKind::rician) {
    const double k = rician->k_factor;
    const double omega = rician->omega;
    los_amplitude = std::sqrt(omega * k / (1.0 + k));
    scatter_sigma = std::sqrt(omega / (1.0 + k) / 2.0);
  }
  for (auto& entry : h.entries) {
    entry = std::complex<double>(los_amplitude + scatter_sigma * gen.normal(),
                                 scatter_sigma * gen.normal());
  }
  return h;
}

double sector_gain_rel_db(double azimuth_offset_deg) {
  double theta = std::fmod(azimuth_offset_deg, 360.0);
  if (theta > 180.0) theta -= 360.0;
  if (theta < -180.0) theta += 360.0;
  constexpr double theta_3db = 70.0;
  constexpr double a_max = 25.0;
  return -std::min(12.0 * (theta / theta_3db) * (theta / theta_3db), a_max);
}

double sector_gain_dbi(double azimuth_offset_deg) {
  return 17.0 + sector_gain_rel_db(azimuth_offset_deg);
}

namespace {

// Nearest multiple of `step`, ties toward zero.
double quantize_toward_zero(double value, double step) {
  const double a = std::abs(value) / step;
  double n = std::floor(a + 0.5);
  if (n == a + 0.5) n -= 1.0;  // exact tie
  return std::copysign(n * step, value);
}

}  // namespace

Boresight quantize_boresight(double azimuth_deg, double elevation_deg) {
  Boresight b;
  double az = quantize_toward_zero(azimuth_deg, 15.0);
  az = std::fmod(az, 360.0);
  if (az < 0.0) az += 360.0;
  b.azimuth_deg = az;
  double el = quantize_toward_zero(elevation_deg, 15.0);
  el = std::clamp(el, -90.0, 90.0);
  b.elevation_deg = el;
  return b;
}

double angle_between_deg(double az1_deg, double el1_deg, double az2_deg, double el2_deg) {
  const double az1 = az1_deg * kRadPerDeg;
  const double el1 = el1_deg * kRadPerDeg;
  const double az2 = az2_deg * kRadPerDeg;
  const double el2 = el2_deg * kRadPerDeg;
  const double dot = std::cos(el1) * std::cos(el2) * std::cos(az1 - az2) +
                     std::sin(el1) * std::sin(el2);
  return std::acos(std::clamp(dot, -1.0, 1.0)) / kRadPerDeg;
}

double beam_psi_3db_deg(double g_max_dbi) {
  return std::sqrt(41253.0 / db_to_linear(g_max_dbi));
}

double beam_gain_dbi(const Boresight& boresight, double target_azimuth_deg,
                     double target_elevation_deg, double g_max_dbi) {
  const double psi = angle_between_deg(boresight.azimuth_deg, boresight.elevation_deg,
                                       target_azimuth_deg, target_elevation_deg);
  const double psi_3db = beam_psi_3db_deg(g_max_dbi);
  const double gain = g_max_dbi - 12.0 * (psi / psi_3db) * (psi / psi_3db);
  return std::max(gain, -10.0);  // side-lobe floor, dBi
}

double rx_power_mw(const BandParams& band, double path_loss_db, double tx_gain_db,
                   double rx_gain_db) {
  return dbm_to_mw(band.tx_power_dbm + tx_gain_db + rx_gain_db - path_loss_db);
}

double sector_interference_mw(const BandParams& band, const geom::Position& ue,
                              std::span<const SectorInterferer> sectors,
                              std::span<const double> shadowing_db) {
  double total = 0.0;
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    const auto g = geom::link_geometry(sectors[i].position, ue);
    double pl = path_loss_db(band.band_id, g.distance_3d);
    if (!shadowing_db.empty()) pl += shadowing_db[i];
    const double offset = g.azimuth - sectors[i].boresight_azimuth_deg;
    const double tx_gain = band.max_antenna_gain_dbi + sector_gain_rel_db(offset);
    total += rx_power_mw(band, pl, tx_gain, band.ue_antenna_gain_dbi);
  }
  return total;
}

double omni_interference_mw(const BandParams& band, const geom::Position& ue,
                            std::span<const geom::Position> interferers,
                            std::span<const double> shadowing_db) {
  double total = 0.0;
  for (std::size_t i = 0; i < interferers.size(); ++i) {
    const double d = geom::distance_3d(interferers[i], ue);
    double pl = path_loss_db(band.band_id, d);
    if (!shadowing_db.empty()) pl += shadowing_db[i];
    total += rx_power_mw(band, pl, band.max_antenna_gain_dbi, band.ue_antenna_gain_dbi);
  }
  return total;
}

double beam_interference_mw(const BandParams& band, const geom::Position& ue,
                            std::span<const BeamInterferer> interferers,
                            std::span<const double> shadowing_db) {
  double total = 0.0;
  for (std::size_t i = 0; i < interferers.size(); ++i) {
    const auto& itf = interferers[i];
    if (itf.draws.empty()) continue;  // idle cell, nothing scheduled
    const auto g = geom::link_geometry(itf.position, ue);
    double pl = path_loss_db(band.band_id, g.distance_3d);
    if (!shadowing_db.empty()) pl += shadowing_db[i];
    double mean_mw = 0.0;
    for (const auto& draw : itf.draws) {
      const double gain =
          beam_gain_dbi(draw, g.azimuth, g.elevation, band.max_antenna_gain_dbi);
      mean_mw += rx_power_mw(band, pl, gain, band.ue_antenna_gain_dbi);
    }
    total += mean_mw / static_cast<double>(itf.draws.size());
  }
  return total;
}

double spectral_efficiency(const ChannelMatrix& h, double signal_mw,
                           double interference_plus_noise_mw, int n_tx,
                           double cap_bps_hz) {
  if (interference_plus_noise_mw <= 0.0) {
    throw std::invalid_argument("spectral_efficiency: denominator must be > 0");
  }
  if (n_tx < 1 || h.n_tx != n_tx) {
    throw std::invalid_argument("spectral_efficiency: n_tx mismatch");
  }
  const double rho = signal_mw / interference_plus_noise_mw;
  if (rho == 0.0) return 0.0;

  // Gram matrix G = I + (rho/n_tx) H H^H, Hermitian positive definite.
  const int n = h.n_rx;
  std::vector<std::complex<double>> gram(static_cast<std::size_t>(n) * n);
  const double scale = rho / static_cast<double>(n_tx);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c <= r; ++c) {
      std::complex<double> acc = 0.0;
      for (int t = 0; t < h.n_tx; ++t) acc += h.at(r, t) * std::conj(h.at(c, t));
      acc *= scale;
      if (r == c) acc += 1.0;
      gram[r * n + c] = acc;
      gram[c * n + r] = std::conj(acc);
    }
  }

  // In-place Cholesky; log-det = 2 sum log(diag L).
  double log2_det = 0.0;
  for (int j = 0; j < n; ++j) {
    double diag = gram[j * n + j].real();
    for (int t = 0; t < j; ++t) diag -= std::norm(gram[j * n + t]);
    if (diag <= 0.0) {
      throw std::runtime_error("spectral_efficiency: Gram matrix not positive definite");
    }
    const double l_jj = std::sqrt(diag);
    log2_det += 2.0 * std::log2(l_jj);
    for (int i = j + 1; i < n; ++i) {
      std::complex<double> acc = gram[i * n + j];
      for (int t = 0; t < j; ++t) {
        acc -= gram[i * n + t] * std::conj(gram[j * n + t]);
      }
      gram[i * n + j] = acc / l_jj;
    }
  }

  if (cap_bps_hz > 0.0) return std::min(log2_det, cap_bps_hz);
  return log2_det;
}

LinkQuality make_link_quality(double path_loss_db, double tx_gain_db, double rx_gain_db,
                              double signal_mw, double interference_mw, double noise_mw,
                              double se_bps_hz) {
  LinkQuality q;
  q.path_loss_db = path_loss_db;
  q.tx_antenna_gain_db = tx_gain_db;
  q.rx_antenna_gain_db = rx_gain_db;
  q.signal_power_mw = signal_mw;
  q.interference_power_mw = interference_mw;
  q.noise_power_mw = noise_mw;
  q.sinr = signal_mw / (interference_mw + noise_mw);
  q.spectral_efficiency_bps_hz = se_bps_hz;
  return q;
}

}  // namespace hetsim::channel
