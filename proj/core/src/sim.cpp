#include "hetsim/sim.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hetsim/channel.hpp"
#include "hetsim/metrics.hpp"
#include "hetsim/rng.hpp"
#include "hetsim/traffic.hpp"

namespace hetsim::sim {

namespace {

using channel::BandParams;
using geom::Position;

constexpr std::uint64_t kSmallCellKeyBase = 0x100000;

std::uint64_t sector_key(int site_id, int sector) { return site_id * 3 + sector; }
std::uint64_t small_cell_key(int cell_index) { return kSmallCellKeyBase + cell_index; }

double shadowing_db(std::uint64_t drop_seed, int ue_id, std::uint64_t tx_key,
                    double sigma_db) {
  if (sigma_db <= 0.0) return 0.0;
  rng::Xoshiro256pp gen(rng::mix_key(
      {drop_seed, static_cast<std::uint64_t>(rng::Stream::shadowing),
       static_cast<std::uint64_t>(ue_id), tx_key}));
  return sigma_db * gen.normal();
}

channel::ChannelMatrix pair_fading(std::uint64_t drop_seed, int ue_id,
                                   std::uint64_t tx_key, channel::FadingKind kind,
                                   int n_rx, int n_tx,
                                   const std::optional<channel::RicianParams>& rician) {
  rng::Xoshiro256pp gen(rng::mix_key(
      {drop_seed, static_cast<std::uint64_t>(rng::Stream::fading),
       static_cast<std::uint64_t>(ue_id), tx_key}));
  return channel::draw_channel(kind, n_rx, n_tx, rician, gen);
}

struct SectorRef {
  int site_id = 0;
  int sector = 0;  // 0..2 within the site
  Position position;
  double boresight_deg = 0.0;
  bool evaluated = false;
};

}  // namespace

DropSpec drop_spec_from_config(const SimConfig& config) {
  DropSpec spec;
  spec.n_small_3g5 = config.deployment.n_small_3g5;
  spec.n_small_60g = config.deployment.n_small_60g;
  spec.traffic_mean_bps = config.traffic.target_mean_bps;
  return spec;
}

DropLinksBundle build_drop_links(const SimConfig& config, const DropSpec& spec,
                                 int drop_index) {
  const std::uint64_t drop_seed =
      rng::mix_key({config.base_seed, static_cast<std::uint64_t>(drop_index)});

  DropLinksBundle bundle;

  if (config.deployment_override.has_value()) {
    bundle.deployment = *config.deployment_override;
    bundle.deployment.seed = drop_seed;
  } else {
    geom::DeploymentConfig dc = config.deployment;
    dc.n_small_3g5 = spec.n_small_3g5;
    dc.n_small_60g = spec.n_small_60g;
    dc.macro_height_m = config.band_macro.bs_height_m;
    dc.small_height_3g5_m = config.band_3g5.bs_height_m;
    dc.small_height_60g_m = config.band_60g.bs_height_m;
    bundle.deployment = geom::generate_deployment(dc, drop_seed);
  }
  auto& dep = bundle.deployment;
  const int n_ue = static_cast<int>(dep.ues.size());
  const int n_small = static_cast<int>(dep.small_cells.size());

  int n_evaluated = 0;
  for (const auto& site : dep.sites) n_evaluated += site.evaluated ? 1 : 0;
  if (n_evaluated != 1) {
    throw std::runtime_error("deployment must have exactly one evaluated site");
  }

  // Demands: one substream per UE. A positive demand in a deployment override
  // is a frozen fixture value and wins over sampling.
  const auto profile = traffic::calibrate(config.traffic.shape_k, config.traffic.bias_bps,
                                          spec.traffic_mean_bps);
  bundle.demands_bps.resize(n_ue);
  for (int u = 0; u < n_ue; ++u) {
    if (config.deployment_override.has_value() && dep.ues[u].demand > 0.0) {
      bundle.demands_bps[u] = dep.ues[u].demand;
      continue;
    }
    rng::Xoshiro256pp gen(rng::mix_key(
        {drop_seed, static_cast<std::uint64_t>(rng::Stream::demand),
         static_cast<std::uint64_t>(u)}));
    bundle.demands_bps[u] = traffic::sample_demand(profile, gen);
    dep.ues[u].demand = bundle.demands_bps[u];
  }

  // Transmitter inventory.
  std::vector<SectorRef> sectors;
  sectors.reserve(dep.sites.size() * 3);
  for (const auto& site : dep.sites) {
    for (int s = 0; s < 3; ++s) {
      sectors.push_back({site.site_id, s, site.position, site.sector_azimuths[s],
                         site.evaluated});
    }
  }
  std::vector<int> cells_3g5;
  std::vector<int> cells_60g;
  for (int c = 0; c < n_small; ++c) {
    (dep.small_cells[c].band == Band::small_3g5 ? cells_3g5 : cells_60g).push_back(c);
  }

  const BandParams& bm = config.band_macro;
  const BandParams& b35 = config.band_3g5;
  const BandParams& b60 = config.band_60g;
  const double noise_macro = channel::noise_power_mw(bm);
  const double noise_35 = channel::noise_power_mw(b35);
  const double noise_60 = channel::noise_power_mw(b60);
  const double cap = config.channel.se_cap_bps_hz;

  auto& links = bundle.links;
  links.w_macro_hz = bm.bandwidth_hz;
  links.w_small_hz.resize(n_small);
  for (int c = 0; c < n_small; ++c) {
    links.w_small_hz[c] = config.band(dep.small_cells[c].band).bandwidth_hz;
  }
  links.ues.resize(n_ue);

  // Per-(UE, small cell) link state shared by the indexing and steered phases.
  struct SmallLink {
    double pl_db = 0.0;  // path loss + shadowing
    double az_deg = 0.0;
    double el_deg = 0.0;
    double dist_m = 0.0;
  };
  std::vector<SmallLink> small_link(static_cast<std::size_t>(n_ue) * n_small);
  auto link_at = [&](int u, int c) -> SmallLink& { return small_link[u * n_small + c]; };

  // --- Macro tier ---------------------------------------------------------
  for (int u = 0; u < n_ue; ++u) {
    auto& ue_links = links.ues[u];
    ue_links.ue_id = dep.ues[u].ue_id;
    ue_links.demand = bundle.demands_bps[u];

    double total_mw = 0.0;
    std::array<double, 3> eval_rx{};
    std::array<int, 3> eval_index{};
    for (std::size_t j = 0; j < sectors.size(); ++j) {
      const auto& sec = sectors[j];
      const auto g = geom::link_geometry(sec.position, dep.ues[u].position);
      const std::uint64_t key = sector_key(sec.site_id, sec.sector);
      const double pl =
          channel::path_loss_db(Band::macro_2g, g.distance_3d) +
          shadowing_db(drop_seed, u, key, config.channel.shadowing_sigma_macro_db);
      const double tx_gain =
          bm.max_antenna_gain_dbi + channel::sector_gain_rel_db(g.azimuth - sec.boresight_deg);
      const double rx = channel::rx_power_mw(bm, pl, tx_gain, bm.ue_antenna_gain_dbi);
      total_mw += rx;
      if (sec.evaluated) {
        eval_rx[sec.sector] = rx;
        eval_index[sec.sector] = static_cast<int>(j);
      }
    }

    double best_ce = -1.0;
    for (int s = 0; s < 3; ++s) {
      const auto& sec = sectors[eval_index[s]];
      const double signal = eval_rx[s];
      const double denom = (total_mw - signal) + noise_macro;
      const auto h = pair_fading(drop_seed, u, sector_key(sec.site_id, sec.sector),
                                 channel::FadingKind::rayleigh, bm.n_ue_antennas,
                                 bm.n_bs_antennas, std::nullopt);
      const double ce = channel::spectral_efficiency(h, signal, denom, bm.n_bs_antennas, cap);
      if (ce > best_ce) {
        best_ce = ce;
        ue_links.macro_sector = s;
        ue_links.macro_ce = ce;
        ue_links.macro_sinr = signal / denom;
      }
    }
  }

  if (n_small == 0) {
    bundle.homogeneous = links;
    return bundle;
  }

  for (int u = 0; u < n_ue; ++u) {
    links.ues[u].small_sinr.assign(n_small, 0.0);
    links.ues[u].small_ce.assign(n_small, 0.0);
  }

  // --- Indexing phase: 3.5 GHz final C^e, 60 GHz omni (no beamforming) -----
  std::vector<double> indexing_ce(static_cast<std::size_t>(n_ue) * n_small, 0.0);

  for (int u = 0; u < n_ue; ++u) {
    const auto& ue_pos = dep.ues[u].position;
    for (int c = 0; c < n_small; ++c) {
      const auto& cell = dep.small_cells[c];
      auto& sl = link_at(u, c);
      const auto g = geom::link_geometry(cell.position, ue_pos);
      sl.az_deg = g.azimuth;
      sl.el_deg = g.elevation;
      sl.dist_m = g.distance_3d;
      const double sigma = cell.band == Band::small_3g5
                               ? config.channel.shadowing_sigma_3g5_db
                               : config.channel.shadowing_sigma_60g_db;
      sl.pl_db = channel::path_loss_db(cell.band, g.distance_3d,
                                       config.channel.extra_60g_db_per_km) +
                 shadowing_db(drop_seed, u, small_cell_key(c), sigma);
    }

    // 3.5 GHz: omni, so indexing and steered values coincide.
    if (!cells_3g5.empty()) {
      double total = 0.0;
      for (int c : cells_3g5) {
        total += channel::rx_power_mw(b35, link_at(u, c).pl_db, b35.max_antenna_gain_dbi,
                                      b35.ue_antenna_gain_dbi);
      }
      for (int c : cells_3g5) {
        const double signal = channel::rx_power_mw(
            b35, link_at(u, c).pl_db, b35.max_antenna_gain_dbi, b35.ue_antenna_gain_dbi);
        const double denom = (total - signal) + noise_35;
        const auto h = pair_fading(drop_seed, u, small_cell_key(c),
                                   channel::FadingKind::rayleigh, b35.n_ue_antennas,
                                   b35.n_bs_antennas, std::nullopt);
        const double ce =
            channel::spectral_efficiency(h, signal, denom, b35.n_bs_antennas, cap);
        links.ues[u].small_ce[c] = ce;
        links.ues[u].small_sinr[c] = signal / denom;
        indexing_ce[u * n_small + c] = ce;
      }
    }

    // 60 GHz indexing: 0 dBi at both ends, interference from omni co-band cells.
    if (!cells_60g.empty()) {
      double total = 0.0;
      for (int c : cells_60g) {
        total += channel::rx_power_mw(b60, link_at(u, c).pl_db, 0.0, 0.0);
      }
      for (int c : cells_60g) {
        const double signal = channel::rx_power_mw(b60, link_at(u, c).pl_db, 0.0, 0.0);
        const double denom = (total - signal) + noise_60;
        const auto rician = channel::rician_params(link_at(u, c).dist_m);
        const auto h = pair_fading(drop_seed, u, small_cell_key(c),
                                   channel::FadingKind::rician, b60.n_ue_antennas,
                                   b60.n_bs_antennas, rician);
        indexing_ce[u * n_small + c] =
            channel::spectral_efficiency(h, signal, denom, b60.n_bs_antennas, cap);
      }
    }

    // Small-cell index allocation over all small cells (Eq. 17 argmax).
    std::vector<double> macro_dummy = {links.ues[u].macro_ce};
    std::vector<double> small_ce_row(indexing_ce.begin() + u * n_small,
                                     indexing_ce.begin() + (u + 1) * n_small);
    links.ues[u].best_small = assoc::allocate_indices_for_ue(macro_dummy, small_ce_row).small_index;
  }

  // --- Beam steering + 60 GHz steered phase -------------------------------
  if (!cells_60g.empty()) {
    // Candidate sets (UEs indexed to each cell) drive the interferer beams.
    std::vector<std::vector<int>> candidates(n_small);
    for (int u = 0; u < n_ue; ++u) {
      const int best = links.ues[u].best_small;
      if (best >= 0 && dep.small_cells[best].band == Band::small_60g) {
        candidates[best].push_back(u);
      }
    }
    std::vector<std::vector<channel::Boresight>> draws(n_small);
    for (int c : cells_60g) {
      if (candidates[c].empty()) continue;  // idle: transmits nothing
      rng::Xoshiro256pp gen(rng::mix_key(
          {drop_seed, static_cast<std::uint64_t>(rng::Stream::beam_draw),
           small_cell_key(c)}));
      draws[c].reserve(config.channel.interferer_beam_draws);
      for (int d = 0; d < config.channel.interferer_beam_draws; ++d) {
        const int target = candidates[c][gen.uniform_index(candidates[c].size())];
        const auto& sl = link_at(target, c);
        draws[c].push_back(channel::quantize_boresight(sl.az_deg, sl.el_deg));
      }
    }

    for (int u = 0; u < n_ue; ++u) {
      // Mean beamed power received from each cell acting as an interferer.
      std::vector<double> beamed_mw(cells_60g.size(), 0.0);
      double total_beamed = 0.0;
      for (std::size_t i = 0; i < cells_60g.size(); ++i) {
        const int c = cells_60g[i];
        if (draws[c].empty()) continue;
        const auto& sl = link_at(u, c);
        double mean = 0.0;
        for (const auto& bs : draws[c]) {
          const double gain =
              channel::beam_gain_dbi(bs, sl.az_deg, sl.el_deg, b60.max_antenna_gain_dbi);
          mean += channel::rx_power_mw(b60, sl.pl_db, gain, b60.ue_antenna_gain_dbi);
        }
        beamed_mw[i] = mean / static_cast<double>(draws[c].size());
        total_beamed += beamed_mw[i];
      }

      for (std::size_t i = 0; i < cells_60g.size(); ++i) {
        const int c = cells_60g[i];
        const auto& sl = link_at(u, c);
        const auto serving_beam = channel::quantize_boresight(sl.az_deg, sl.el_deg);
        const double tx_gain = channel::beam_gain_dbi(serving_beam, sl.az_deg, sl.el_deg,
                                                      b60.max_antenna_gain_dbi);
        const double signal =
            channel::rx_power_mw(b60, sl.pl_db, tx_gain, b60.ue_antenna_gain_dbi);
        const double denom = (total_beamed - beamed_mw[i]) + noise_60;
        const auto rician = channel::rician_params(sl.dist_m);
        const auto h = pair_fading(drop_seed, u, small_cell_key(c),
                                   channel::FadingKind::rician, b60.n_ue_antennas,
                                   b60.n_bs_antennas, rician);
        links.ues[u].small_ce[c] =
            channel::spectral_efficiency(h, signal, denom, b60.n_bs_antennas, cap);
        links.ues[u].small_sinr[c] = signal / denom;
      }
    }
  }

  // Paired homogeneous view: identical macro links, no small cells.
  bundle.homogeneous.w_macro_hz = links.w_macro_hz;
  bundle.homogeneous.ues.resize(n_ue);
  for (int u = 0; u < n_ue; ++u) {
    auto& hue = bundle.homogeneous.ues[u];
    const auto& ue_links = links.ues[u];
    hue.ue_id = ue_links.ue_id;
    hue.demand = ue_links.demand;
    hue.macro_sector = ue_links.macro_sector;
    hue.macro_sinr = ue_links.macro_sinr;
    hue.macro_ce = ue_links.macro_ce;
    hue.best_small = -1;
  }
  return bundle;
}

DropResult run_drop(const SimConfig& config, const DropSpec& spec, int drop_index) {
  const auto start = std::chrono::steady_clock::now();

  DropResult result;
  result.drop_index = drop_index;
  result.seed = rng::mix_key({config.base_seed, static_cast<std::uint64_t>(drop_index)});

  const auto bundle = build_drop_links(config, spec, drop_index);
  result.n_ues = static_cast<int>(bundle.links.ues.size());

  const auto hom_assignment = assoc::associate_max_sinr(bundle.homogeneous);
  result.homogeneous_rate_bps =
      metrics::system_rate_bps(hom_assignment, bundle.homogeneous);

  for (Method method : config.association.methods) {
    MethodResult mr;
    mr.method = method;
    assoc::Assignment assignment =
        method == Method::max_sinr
            ? assoc::associate_max_sinr(bundle.links)
            : assoc::associate_combinatorial(bundle.links, config.association.max_iters);
    const auto report = metrics::system_rate(assignment, bundle.links);
    mr.system_rate_bps = report.system_rate_bps;
    mr.gain = metrics::rate_gain(report.system_rate_bps, result.homogeneous_rate_bps);
    mr.macro_users = report.macro_user_count;
    mr.iterations = assignment.iterations;
    mr.converged = assignment.converged;
    result.methods.push_back(mr);
  }

  result.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

struct Scenario {
  Band band = Band::small_3g5;
  int n_smallcells = 0;
  double traffic_mean_bps = 0.0;
};

struct ScenarioOutcome {
  std::vector<DropResult> drops;
  bool failed = false;
  std::string error;
};

struct Aggregate {
  double mean = 0.0;
  double ci_half = 0.0;
};

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate agg;
  const int n = static_cast<int>(values.size());
  if (n == 0) return agg;
  double sum = 0.0;
  for (double v : values) sum += v;
  agg.mean = sum / n;
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    const double sd = std::sqrt(ss / (n - 1));
    agg.ci_half = 1.96 * sd / std::sqrt(static_cast<double>(n));
  }
  return agg;
}

}  // namespace

std::vector<SweepRow> sweep(const SimConfig& config, std::ostream* progress) {
  std::vector<Scenario> scenarios;
  for (Band band : config.sweep.bands) {
    for (double mean : config.sweep.traffic_means_bps) {
      for (int n : config.sweep.n_smallcells) {
        scenarios.push_back({band, n, mean});
      }
    }
  }

  struct Task {
    int scenario = 0;
    int drop_index = 0;
  };
  std::vector<Task> tasks;
  tasks.reserve(scenarios.size() * config.n_drops);
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    for (int d = 0; d < config.n_drops; ++d) {
      tasks.push_back({static_cast<int>(s), d});
    }
  }

  std::vector<ScenarioOutcome> outcomes(scenarios.size());
  for (auto& outcome : outcomes) outcome.drops.resize(config.n_drops);

  int n_workers = config.workers > 0
                      ? config.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;

  std::atomic<std::size_t> next_task{0};
  std::atomic<int> completed{0};
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next_task.fetch_add(1);
      if (t >= tasks.size()) return;
      const auto& task = tasks[t];
      const auto& sc = scenarios[task.scenario];
      DropSpec spec;
      spec.traffic_mean_bps = sc.traffic_mean_bps;
      (sc.band == Band::small_3g5 ? spec.n_small_3g5 : spec.n_small_60g) = sc.n_smallcells;
      try {
        outcomes[task.scenario].drops[task.drop_index] =
            run_drop(config, spec, task.drop_index);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        outcomes[task.scenario].failed = true;
        outcomes[task.scenario].error = e.what();
      }
      completed.fetch_add(1);
    }
  };

  {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (progress != nullptr) {
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      const auto& sc = scenarios[s];
      (*progress) << "scenario band=" << to_string(sc.band) << " n=" << sc.n_smallcells
                  << " mean=" << sc.traffic_mean_bps
                  << (outcomes[s].failed ? " FAILED: " + outcomes[s].error : " done")
                  << "\n";
    }
  }

  // Rows: methods x bands x n_smallcells x traffic means, in config order.
  std::vector<SweepRow> rows;
  for (Method method : config.association.methods) {
    for (Band band : config.sweep.bands) {
      for (int n : config.sweep.n_smallcells) {
        for (double mean : config.sweep.traffic_means_bps) {
          int scenario_index = -1;
          for (std::size_t s = 0; s < scenarios.size(); ++s) {
            if (scenarios[s].band == band && scenarios[s].n_smallcells == n &&
                scenarios[s].traffic_mean_bps == mean) {
              scenario_index = static_cast<int>(s);
              break;
            }
          }
          const auto& outcome = outcomes[scenario_index];

          SweepRow row;
          row.method = method;
          row.band_label = to_string(band);
          row.n_smallcells = n;
          row.traffic_mean_bps = mean;
          row.n_drops = config.n_drops;
          if (outcome.failed) {
            row.failed = true;
            row.gain_mean = row.gain_ci95_lo = row.gain_ci95_hi =
                std::numeric_limits<double>::quiet_NaN();
            row.system_rate_mean_bps = std::numeric_limits<double>::quiet_NaN();
            row.macro_load_mean = std::numeric_limits<double>::quiet_NaN();
          } else {
            std::vector<double> gains;
            std::vector<double> rates;
            std::vector<double> loads;
            for (const auto& drop : outcome.drops) {
              for (const auto& mr : drop.methods) {
                if (mr.method != method) continue;
                gains.push_back(mr.gain);
                rates.push_back(mr.system_rate_bps);
                loads.push_back(drop.n_ues > 0 ? static_cast<double>(mr.macro_users) /
                                                     static_cast<double>(drop.n_ues)
                                               : 0.0);
              }
            }
            const auto g = aggregate(gains);
            const auto r = aggregate(rates);
            const auto l = aggregate(loads);
            row.gain_mean = g.mean;
            row.gain_ci95_lo = g.mean - g.ci_half;
            row.gain_ci95_hi = g.mean + g.ci_half;
            row.system_rate_mean_bps = r.mean;
            row.macro_load_mean = l.mean;
          }
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::string format_g9(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "method,band,n_smallcells,traffic_mean_bps,n_drops,gain_mean,gain_ci95_lo,"
         "gain_ci95_hi,system_rate_mean_bps,macro_load_mean\n";
  for (const auto& row : rows) {
    out << to_string(row.method) << ',' << row.band_label << ',' << row.n_smallcells
        << ',' << format_g9(row.traffic_mean_bps) << ',' << row.n_drops << ','
        << format_g9(row.gain_mean) << ',' << format_g9(row.gain_ci95_lo) << ','
        << format_g9(row.gain_ci95_hi) << ',' << format_g9(row.system_rate_mean_bps)
        << ',' << format_g9(row.macro_load_mean) << '\n';
  }
  return out.str();
}

std::vector<SweepRow> sweep_from_csv(const std::string& csv_text) {
  std::vector<SweepRow> rows;
  std::istringstream in(csv_text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 10) throw std::runtime_error("csv: expected 10 fields");
    SweepRow row;
    row.method = method_from_string(fields[0]);
    row.band_label = fields[1];
    row.n_smallcells = std::stoi(fields[2]);
    row.traffic_mean_bps = std::strtod(fields[3].c_str(), nullptr);
    row.n_drops = std::stoi(fields[4]);
    row.gain_mean = std::strtod(fields[5].c_str(), nullptr);
    row.gain_ci95_lo = std::strtod(fields[6].c_str(), nullptr);
    row.gain_ci95_hi = std::strtod(fields[7].c_str(), nullptr);
    row.system_rate_mean_bps = std::strtod(fields[8].c_str(), nullptr);
    row.macro_load_mean = std::strtod(fields[9].c_str(), nullptr);
    row.failed = std::isnan(row.gain_mean);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hetsim::sim
