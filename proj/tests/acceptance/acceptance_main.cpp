// Acceptance suite: runs the evaluation-level checks end to end and prints
// one pass/fail line per criterion.
//
//   acceptance            runs criteria 1-7
//   acceptance 2 5        runs a subset
//
// Exit code is the number of failed criteria.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hetsim/association.hpp"
#include "hetsim/channel.hpp"
#include "hetsim/config.hpp"
#include "hetsim/linkbudget.hpp"
#include "hetsim/rng.hpp"
#include "hetsim/sim.hpp"
#include "hetsim/traffic.hpp"
#include "hetsim/validate.hpp"

using namespace hetsim;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
  std::atomic<int> next{0};
  auto run = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::max(1, workers); ++w) pool.emplace_back(run);
  for (auto& th : pool) th.join();
}

// Criterion 1 — formula exactness (unit scale, < 1 s).
Outcome criterion1() {
  Outcome out;
  bool ok = true;
  std::ostringstream detail;

  const double pl60 = channel::path_loss_db(Band::small_60g, 5.0);
  ok &= pl60 == 82.02;
  detail << "pl60(5m)=" << num(pl60);

  const double plm = channel::path_loss_db(Band::macro_2g, 1000.0);
  ok &= plm == 128.1;
  detail << " macro(1km)=" << num(plm);

  const double gain = linkbudget::array_budget_gain_db(32, 4);
  ok &= std::abs(gain - 36.1) <= 0.05;
  detail << " array(32,4)=" << num(gain);

  linkbudget::ScalingParams p;
  const linkbudget::ScalingReference ref{2.0e9, 500.0};
  p.f0_hz = 2.0e9;
  const auto base = linkbudget::user_rate_scaling(p, ref);
  p.f0_hz = 20.0e9;
  const auto scaled = linkbudget::user_rate_scaling(p, ref);
  const double ratio = scaled.c_ue_bps / base.c_ue_bps;
  ok &= std::abs(ratio - 1000.0) <= 1000.0 * 1e-12;
  detail << " cue_ratio(10f)=" << num(ratio);

  out.passed = ok;
  out.detail = detail.str();
  return out;
}

// Criterion 2 — solver correctness against the exhaustive oracle.
Outcome criterion2() {
  const auto check = validate::check_solver_oracle_campaign(1000, 12);
  return {check.passed, check.detail};
}

// Criterion 3 — distributional checks at the stated sample sizes.
Outcome criterion3() {
  bool ok = true;
  std::ostringstream detail;

  const auto profile = traffic::calibrate(0.2892, 4000.0, 64000.0);
  rng::Xoshiro256pp gen(0xacce55);
  const int n = 1000000;
  std::vector<double> samples(n);
  double sum = 0.0;
  for (auto& s : samples) {
    s = traffic::sample_demand(profile, gen);
    sum += s;
  }
  const double mean = sum / n;
  ok &= std::abs(mean / 64000.0 - 1.0) < 0.01;
  detail << "mean=" << num(mean);

  std::sort(samples.begin(), samples.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = traffic::demand_cdf(profile, samples[i]);
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  ok &= ks < 0.005;
  detail << " ks=" << num(ks);

  for (double d : {0.0, 5.0, 25.0, 50.0}) {
    const auto rp = channel::rician_params(d);
    const auto h = channel::draw_channel(channel::FadingKind::rician, 1000, 1000, rp, gen);
    double acc = 0.0;
    for (const auto& e : h.entries) acc += std::norm(e);
    const double m2 = acc / h.entries.size();
    ok &= std::abs(m2 / rp.omega - 1.0) < 0.01;
    detail << " E|h|2(d=" << d << ")=" << num(m2) << "/" << num(rp.omega);
  }

  return {ok, detail.str()};
}

// Criterion 4 — paired dominance at 20 small cells, both bands, both means.
Outcome criterion4() {
  SimConfig config = desk_preset();
  config.association.methods = {Method::max_sinr, Method::combinatorial};

  const int n_drops = 100;
  bool ok = true;
  std::ostringstream detail;

  for (Band band : {Band::small_3g5, Band::small_60g}) {
    for (double mean : {64.0e3, 64.0e6}) {
      sim::DropSpec spec;
      spec.traffic_mean_bps = mean;
      (band == Band::small_3g5 ? spec.n_small_3g5 : spec.n_small_60g) = 20;

      std::vector<sim::DropResult> drops(n_drops);
      parallel_for(n_drops, 2, [&](int d) { drops[d] = sim::run_drop(config, spec, d); });

      int dominated = 0;
      double ratio_sum = 0.0;
      for (const auto& drop : drops) {
        double max_sinr_rate = 0.0;
        double comb_rate = 0.0;
        for (const auto& mr : drop.methods) {
          (mr.method == Method::max_sinr ? max_sinr_rate : comb_rate) = mr.system_rate_bps;
        }
        if (comb_rate >= max_sinr_rate) ++dominated;
        ratio_sum += comb_rate / max_sinr_rate;
      }
      const double dominance = static_cast<double>(dominated) / n_drops;
      const double mean_ratio = ratio_sum / n_drops;
      ok &= dominance >= 0.95;
      if (mean == 64.0e6) ok &= mean_ratio >= 1.5;
      detail << " [" << to_string(band) << "@" << num(mean / 1e6)
             << "Mbps dom=" << num(dominance) << " ratio=" << num(mean_ratio) << "]";
    }
  }
  return {ok, detail.str()};
}

SimConfig fig6_config() {
  SimConfig config = desk_preset();  // 500 UEs, 20 drops
  config.association.methods = {Method::max_sinr, Method::combinatorial};
  config.sweep.n_smallcells = {0, 25, 50, 100};
  config.sweep.bands = {Band::small_3g5, Band::small_60g};
  config.sweep.traffic_means_bps = {64.0e3, 64.0e6};
  return config;
}

double gain_at(const std::vector<sim::SweepRow>& rows, Method method, const char* band,
               int n, double mean) {
  for (const auto& row : rows) {
    if (row.method == method && row.band_label == band && row.n_smallcells == n &&
        row.traffic_mean_bps == mean) {
      return row.gain_mean;
    }
  }
  return std::nan("");
}

// Criterion 5 — Fig. 6 structure at desk scale (proposed-method gains).
Outcome criterion5() {
  const auto rows = sim::sweep(fig6_config(), nullptr);

  const double g35_present = gain_at(rows, Method::combinatorial, "small_3g5", 100, 64e3);
  const double g60_present = gain_at(rows, Method::combinatorial, "small_60g", 100, 64e3);
  const double g35_future = gain_at(rows, Method::combinatorial, "small_3g5", 100, 64e6);
  const double g60_future = gain_at(rows, Method::combinatorial, "small_60g", 100, 64e6);

  std::ostringstream detail;
  detail << "64kbps: 3g5=" << num(g35_present) << " 60g=" << num(g60_present)
         << "; 64Mbps: 3g5=" << num(g35_future) << " 60g=" << num(g60_future);

  bool ok = true;
  // (a) present load: bands agree within a factor of 2 and both reach >= 3x.
  const double agreement =
      std::max(g35_present, g60_present) / std::min(g35_present, g60_present);
  ok &= agreement <= 2.0;
  detail << " agreement=" << num(agreement);
  ok &= g35_present >= 3.0;
  ok &= g60_present >= 3.0;
  // (b) future load: band separation >= 3x and 60 GHz >= 100x.
  const double separation = g60_future / g35_future;
  ok &= separation >= 3.0;
  ok &= g60_future >= 100.0;
  detail << " separation=" << num(separation);

  return {ok, detail.str()};
}

// Criterion 6 — byte-identical determinism across runs and worker counts.
Outcome criterion6() {
  auto config = fig6_config();
  config.workers = 2;
  const auto run1 = sim::sweep_to_csv(sim::sweep(config, nullptr));
  const auto run2 = sim::sweep_to_csv(sim::sweep(config, nullptr));
  config.workers = 1;
  const auto run3 = sim::sweep_to_csv(sim::sweep(config, nullptr));

  const bool same_run = run1 == run2;
  const bool same_workers = run1 == run3;
  std::ostringstream detail;
  detail << "rerun_identical=" << (same_run ? "yes" : "NO")
         << " worker_invariant=" << (same_workers ? "yes" : "NO")
         << " bytes=" << run1.size();
  return {same_run && same_workers, detail.str()};
}

// Criterion 7 — the full invariant battery.
Outcome criterion7() {
  const auto report = validate::run_battery(desk_preset());
  std::ostringstream detail;
  for (const auto& check : report.checks) {
    detail << (check.passed ? " " : " FAIL:") << check.name;
  }
  return {report.all_passed(), detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7};

  static const char* kNames[] = {
      "formula exactness",       "solver vs brute-force oracle",
      "distributional checks",   "paired dominance",
      "fig6 structure at desk scale", "sweep determinism",
      "invariant battery"};

  int failures = 0;
  for (int criterion : wanted) {
    Outcome outcome;
    switch (criterion) {
      case 1: outcome = criterion1(); break;
      case 2: outcome = criterion2(); break;
      case 3: outcome = criterion3(); break;
      case 4: outcome = criterion4(); break;
      case 5: outcome = criterion5(); break;
      case 6: outcome = criterion6(); break;
      case 7: outcome = criterion7(); break;
      default:
        std::cerr << "unknown criterion " << criterion << "\n";
        return 64;
    }
    if (!outcome.passed) ++failures;
    std::cout << (outcome.passed ? "[PASS]" : "[FAIL]") << " criterion " << criterion
              << " (" << kNames[criterion - 1] << "): " << outcome.detail << "\n";
  }
  return failures;
}
