#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hetsim/association.hpp"
#include "hetsim/config.hpp"

namespace hetsim::sim {

// One evaluation point: small-cell population and traffic scenario.
struct DropSpec {
  int n_small_3g5 = 0;
  int n_small_60g = 0;
  double traffic_mean_bps = 64.0e3;
};

DropSpec drop_spec_from_config(const SimConfig& config);

// Everything the association engines need for one drop, plus the paired
// homogeneous (macro-only) view of the same links.
struct DropLinksBundle {
  geom::Deployment deployment;
  std::vector<double> demands_bps;
  assoc::DropLinks links;       // full HetNet link table
  assoc::DropLinks homogeneous; // same macro links, zero small cells
};

// Deterministic in (config, spec, drop_index): derives the drop seed from
// (base_seed, drop_index) and gives every stochastic consumer its own named
// substream.
DropLinksBundle build_drop_links(const SimConfig& config, const DropSpec& spec,
                                 int drop_index);

struct MethodResult {
  Method method = Method::max_sinr;
  double system_rate_bps = 0.0;
  double gain = 1.0;
  int macro_users = 0;
  int iterations = 0;
  bool converged = true;
};

struct DropResult {
  int drop_index = 0;
  std::uint64_t seed = 0;
  int n_ues = 0;
  double homogeneous_rate_bps = 0.0;
  std::vector<MethodResult> methods;
  double runtime_s = 0.0;
};

// Runs every configured association method on one drop and pairs it with the
// homogeneous baseline on the same random numbers.
DropResult run_drop(const SimConfig& config, const DropSpec& spec, int drop_index);

// Aggregated sweep output; one row per (method, band, n_smallcells, mean).
struct SweepRow {
  Method method = Method::max_sinr;
  std::string band_label;
  int n_smallcells = 0;
  double traffic_mean_bps = 0.0;
  int n_drops = 0;
  double gain_mean = 0.0;
  double gain_ci95_lo = 0.0;
  double gain_ci95_hi = 0.0;
  double system_rate_mean_bps = 0.0;
  double macro_load_mean = 0.0;  // mean fraction of UEs served by the macro
  bool failed = false;
};

// Full grid; drops run in parallel across `config.workers` threads but the
// output is independent of the worker count. Failed grid points are reported
// with nan aggregates and the sweep continues.
std::vector<SweepRow> sweep(const SimConfig& config, std::ostream* progress = nullptr);

// Exact CSV emission (pinned column order, %.9g numbers).
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_from_csv(const std::string& csv_text);

// %.9g: the formatting contract shared by every numeric CSV field.
std::string format_g9(double value);

}  // namespace hetsim::sim
