// hetsim: multi-band HetNet system-level simulator CLI.
//
// Subcommands: run (single grid point), sweep (full grid), linkbudget
// (scaling-law / phased-array calculators), validate (invariant battery).
// Exit codes: 0 success, 1 config error, 2 runtime failure, 3 validation
// failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hetsim/config.hpp"
#include "hetsim/linkbudget.hpp"
#include "hetsim/sim.hpp"
#include "hetsim/svg.hpp"
#include "hetsim/validate.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset = "desk";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  bool dump_config = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file (overrides the preset)");
  cmd->add_option("--preset", opts.preset, "Built-in preset: desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--seed", opts.seed, "Base seed (overrides config)");
  cmd->add_option("--workers", opts.workers, "Worker threads, 0 = all cores");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_flag("--dump-config", opts.dump_config,
                "Print the effective config as JSON and exit");
}

hetsim::SimConfig resolve_config(const CommonOpts& opts) {
  hetsim::SimConfig config = opts.config_path.empty()
                                 ? hetsim::preset_by_name(opts.preset)
                                 : hetsim::load_config_file(opts.config_path);
  if (opts.seed) config.base_seed = *opts.seed;
  if (opts.workers) config.workers = *opts.workers;
  if (opts.out_dir) config.output.dir = *opts.out_dir;
  hetsim::validate_config(config);
  if (opts.dump_config) {
    std::cout << hetsim::config_to_json(config) << "\n";
    std::exit(0);
  }
  return config;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string run_band_label(const hetsim::SimConfig& config) {
  const bool has_35 = config.deployment.n_small_3g5 > 0;
  const bool has_60 = config.deployment.n_small_60g > 0;
  if (has_35 && has_60) return "mixed";
  if (has_60) return "small_60g";
  if (has_35) return "small_3g5";
  return "none";
}

int cmd_run(const CommonOpts& opts) {
  const auto config = resolve_config(opts);
  const auto spec = hetsim::sim::drop_spec_from_config(config);

  std::ostringstream drops_csv;
  drops_csv << "drop_index,seed,method,system_rate_bps,gain,macro_users,iterations\n";

  std::vector<hetsim::sim::DropResult> results;
  for (int d = 0; d < config.n_drops; ++d) {
    results.push_back(hetsim::sim::run_drop(config, spec, d));
    for (const auto& mr : results.back().methods) {
      drops_csv << d << ',' << results.back().seed << ',' << hetsim::to_string(mr.method)
                << ',' << hetsim::sim::format_g9(mr.system_rate_bps) << ','
                << hetsim::sim::format_g9(mr.gain) << ',' << mr.macro_users << ','
                << mr.iterations << '\n';
    }
  }

  // Aggregate into the standard sweep row schema, one row per method.
  std::vector<hetsim::sim::SweepRow> rows;
  for (hetsim::Method method : config.association.methods) {
    hetsim::sim::SweepRow row;
    row.method = method;
    row.band_label = run_band_label(config);
    row.n_smallcells = config.deployment.n_small_3g5 + config.deployment.n_small_60g;
    row.traffic_mean_bps = config.traffic.target_mean_bps;
    row.n_drops = config.n_drops;
    double gain_sum = 0.0, rate_sum = 0.0, load_sum = 0.0;
    std::vector<double> gains;
    for (const auto& drop : results) {
      for (const auto& mr : drop.methods) {
        if (mr.method != method) continue;
        gains.push_back(mr.gain);
        gain_sum += mr.gain;
        rate_sum += mr.system_rate_bps;
        load_sum += static_cast<double>(mr.macro_users) / drop.n_ues;
      }
    }
    const int n = static_cast<int>(gains.size());
    row.gain_mean = gain_sum / n;
    double ss = 0.0;
    for (double g : gains) ss += (g - row.gain_mean) * (g - row.gain_mean);
    const double half = n > 1 ? 1.96 * std::sqrt(ss / (n - 1)) / std::sqrt(n) : 0.0;
    row.gain_ci95_lo = row.gain_mean - half;
    row.gain_ci95_hi = row.gain_mean + half;
    row.system_rate_mean_bps = rate_sum / n;
    row.macro_load_mean = load_sum / n;
    rows.push_back(row);
  }
  const std::string csv = hetsim::sim::sweep_to_csv(rows);
  std::cout << csv;

  if (opts.out_dir || !config.output.dir.empty()) {
    const std::filesystem::path dir = config.output.dir;
    write_file(dir / "run.csv", csv);
    write_file(dir / "drops.csv", drops_csv.str());
    std::cerr << "wrote " << (dir / "run.csv").string() << " and "
              << (dir / "drops.csv").string() << "\n";
  }
  return 0;
}

int cmd_sweep(const CommonOpts& opts, bool emit_svg) {
  auto config = resolve_config(opts);
  if (emit_svg) config.output.svg = true;

  const auto rows = hetsim::sim::sweep(config, &std::cerr);
  const std::string csv = hetsim::sim::sweep_to_csv(rows);

  const std::filesystem::path dir = config.output.dir;
  write_file(dir / "sweep.csv", csv);
  std::cerr << "wrote " << (dir / "sweep.csv").string() << "\n";
  if (config.output.svg) {
    write_file(dir / "gain_vs_smallcells.svg", hetsim::svg::gain_chart(rows));
    std::cerr << "wrote " << (dir / "gain_vs_smallcells.svg").string() << "\n";
  }
  std::cout << csv;

  for (const auto& row : rows) {
    if (row.failed) return 2;
  }
  return 0;
}

int cmd_linkbudget(double f_ref, double d_ref, double beta, const std::string& mode,
                   double gamma0, double alpha, double eta,
                   std::vector<double> freqs, int ntx, int nrx) {
  using namespace hetsim::linkbudget;

  ScalingParams params;
  params.fractional_bandwidth = alpha;
  params.beta = beta;
  params.gamma0 = gamma0;
  params.eta_users_per_m2 = eta;
  params.gain_scaling = mode == "linear_array"  ? GainScaling::linear_array
                        : mode == "planar_array" ? GainScaling::planar_array
                                                 : GainScaling::fixed;
  const ScalingReference ref{f_ref, d_ref};

  if (freqs.empty()) {
    freqs = {f_ref, 2.0 * f_ref, 5.0 * f_ref, 10.0 * f_ref, 30.0 * f_ref};
  }

  ScalingParams at_ref = params;
  at_ref.f0_hz = f_ref;
  const auto base = user_rate_scaling(at_ref, ref);

  std::cout << "f0_hz,d0_m,n_ue,c_ue_ratio\n";
  for (double f : freqs) {
    ScalingParams p = params;
    p.f0_hz = f;
    const auto urs = user_rate_scaling(p, ref);
    const double d0 = coverage_radius_m(p, ref);
    std::cout << hetsim::sim::format_g9(f) << ',' << hetsim::sim::format_g9(d0) << ','
              << hetsim::sim::format_g9(urs.n_ue) << ','
              << hetsim::sim::format_g9(urs.c_ue_bps / base.c_ue_bps) << '\n';
  }

  if (ntx >= 1 && nrx >= 1) {
    const double gain = array_budget_gain_db(ntx, nrx);
    std::cout << "array_budget_gain_db," << hetsim::sim::format_g9(gain) << '\n';
    std::cout << "distance_ratio_free_space,"
              << hetsim::sim::format_g9(distance_ratio_from_gain(gain)) << '\n';
  }
  return 0;
}

int cmd_validate(const CommonOpts& opts) {
  const auto config = resolve_config(opts);
  const auto report = hetsim::validate::run_battery(config);
  for (const auto& check : report.checks) {
    std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": "
              << check.detail << "\n";
  }
  if (!report.all_passed()) {
    std::cout << "validation FAILED\n";
    return 3;
  }
  std::cout << "all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-band HetNet system-level simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run one grid point and report per-drop results");
  add_common(run_cmd, run_opts);

  CommonOpts sweep_opts;
  bool sweep_svg = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the full evaluation grid, write CSV");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_flag("--svg", sweep_svg, "Also write an SVG gain chart");

  double f_ref = 2.0e9, d_ref = 1000.0, beta = 3.0, gamma0 = 1.0, alpha = 0.01, eta = 1e-4;
  std::string mode = "fixed";
  std::vector<double> freqs;
  int ntx = 0, nrx = 0;
  auto* lb_cmd = app.add_subcommand("linkbudget", "Scaling-law and phased-array tables");
  lb_cmd->add_option("--f-ref", f_ref, "Anchor frequency in Hz");
  lb_cmd->add_option("--d-ref", d_ref, "Coverage at the anchor frequency, meters");
  lb_cmd->add_option("--beta", beta, "Path-loss exponent for fixed-gain mode");
  lb_cmd->add_option("--mode", mode, "Gain scaling: fixed, linear_array, planar_array")
      ->check(CLI::IsMember({"fixed", "linear_array", "planar_array"}));
  lb_cmd->add_option("--gamma0", gamma0, "Minimum SNR, linear");
  lb_cmd->add_option("--alpha", alpha, "Fractional bandwidth");
  lb_cmd->add_option("--eta", eta, "User density per m^2");
  lb_cmd->add_option("--freqs", freqs, "Frequencies to tabulate, Hz");
  lb_cmd->add_option("--ntx", ntx, "Phased-array transmit elements");
  lb_cmd->add_option("--nrx", nrx, "Phased-array receive elements");

  CommonOpts validate_opts;
  auto* validate_cmd = app.add_subcommand("validate", "Run the invariant battery");
  add_common(validate_cmd, validate_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, sweep_svg);
    if (lb_cmd->parsed()) {
      return cmd_linkbudget(f_ref, d_ref, beta, mode, gamma0, alpha, eta, freqs, ntx, nrx);
    }
    if (validate_cmd->parsed()) return cmd_validate(validate_opts);
  } catch (const hetsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
