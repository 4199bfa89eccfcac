#include <doctest.h>

#include <stdexcept>

#include <bit>
#include <cmath>

#include "hetsim/association.hpp"
#include "hetsim/metrics.hpp"
#include "hetsim/rng.hpp"

using namespace hetsim;
using assoc::SubProblem;
using assoc::SubUE;

TEST_CASE("index allocation: argmax with lowest-id ties") {
  auto choice = assoc::allocate_indices_for_ue({2.0, 1.5, 0.3}, {});
  CHECK(choice.macro_index == 0);
  CHECK(choice.small_index == -1);

  choice = assoc::allocate_indices_for_ue({0.3, 1.5, 2.0}, {1.0, 3.0, 3.0});
  CHECK(choice.macro_index == 2);
  CHECK(choice.small_index == 1);  // tie broken toward the lower id

  CHECK_THROWS_AS(assoc::allocate_indices_for_ue({}, {1.0}), std::invalid_argument);
}

TEST_CASE("topk_select") {
  auto x = assoc::topk_select({3.0, 1.0, 2.0}, 2);
  CHECK(x == std::vector<bool>{true, false, true});

  CHECK(assoc::topk_select({3.0, 1.0, 2.0}, 0) == std::vector<bool>{false, false, false});
  CHECK(assoc::topk_select({}, 0).empty());
  CHECK_THROWS_AS(assoc::topk_select({1.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(assoc::topk_select({1.0}, -1), std::invalid_argument);

  // Ties go to the lower index.
  x = assoc::topk_select({5.0, 5.0, 5.0}, 2);
  CHECK(x == std::vector<bool>{true, true, false});

  // Exactness at fixed k: objective equals the best over all size-k subsets.
  rng::Xoshiro256pp gen(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(gen.uniform_index(10));
    std::vector<double> f(n);
    for (auto& v : f) v = gen.uniform(-4.0, 4.0);
    for (int k = 0; k <= n; ++k) {
      const auto sel = assoc::topk_select(f, k);
      double got = 0.0;
      for (int i = 0; i < n; ++i) {
        if (sel[i]) got += f[i];
      }
      double best = -1e300;
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
          if ((mask >> i) & 1u) v += f[i];
        }
        best = std::max(best, v);
      }
      CHECK(got == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

namespace {

SubProblem worked_example() {
  SubProblem sp;
  sp.small_cell_id = 0;
  sp.alpha_s = 1.0;
  sp.w_macro_hz = 10.0e6;
  sp.w_small_hz = 2.0e9;
  sp.ues = {{0, 1.0, 5.0, 1.0e12}, {1, 1.0, 0.001, 1.0e12}};
  return sp;
}

}  // namespace

TEST_CASE("solve_subproblem: two-user worked example") {
  const auto sp = worked_example();
  const auto sol = assoc::solve_subproblem(sp);
  // Enumerating all four assignments: k=1 with the strong-small-cell user
  // offloaded wins at 10 MHz * 1 + 2 GHz * 5 = 10.01 Gbps.
  CHECK(sol.k == 1);
  CHECK(sol.on_macro == std::vector<bool>{false, true});
  CHECK(sol.value_bps == doctest::Approx(10.01e9).epsilon(1e-12));

  const auto exact = assoc::brute_force_subproblem(sp);
  CHECK(exact.value_bps == doctest::Approx(sol.value_bps).epsilon(1e-12));
  CHECK(exact.k == sol.k);
}

TEST_CASE("solve_subproblem boundaries and ties") {
  SubProblem sp;
  sp.alpha_s = 0.5;
  sp.w_macro_hz = 10.0e6;
  sp.w_small_hz = 100.0e6;

  SUBCASE("empty problem") {
    const auto sol = assoc::solve_subproblem(sp);
    CHECK(sol.k == 0);
    CHECK(sol.value_bps == 0.0);
    CHECK(sol.on_macro.empty());
  }

  SUBCASE("zero demands collapse every k; tie keeps k = 0") {
    sp.ues = {{0, 2.0, 3.0, 0.0}, {1, 1.0, 1.0, 0.0}, {2, 0.5, 4.0, 0.0}};
    const auto sol = assoc::solve_subproblem(sp);
    CHECK(sol.value_bps == 0.0);
    CHECK(sol.k == 0);
  }

  SUBCASE("single user") {
    sp.ues = {{0, 2.0, 3.0, 1.0e9}};
    const auto fast = assoc::solve_subproblem(sp);
    const auto exact = assoc::brute_force_subproblem(sp);
    CHECK(fast.value_bps == doctest::Approx(exact.value_bps).epsilon(1e-12));
    // All-small: min(100e6*3, 1e9) = 3e8 beats all-macro min(0.5*10e6*2, 1e9) = 1e7.
    CHECK(fast.k == 0);
    CHECK(fast.value_bps == doctest::Approx(3.0e8).epsilon(1e-12));
  }
}

namespace {

SubProblem random_instance(rng::Xoshiro256pp& gen, int max_users) {
  SubProblem sp;
  sp.alpha_s = gen.uniform();
  sp.w_macro_hz = 10e6;
  sp.w_small_hz = gen.uniform() < 0.5 ? 100e6 : 2e9;
  const int n = static_cast<int>(gen.uniform_index(max_users + 1));
  for (int u = 0; u < n; ++u) {
    sp.ues.push_back({u, gen.uniform(0.0, 8.0),
                      gen.uniform() < 0.15 ? 0.0 : gen.uniform(0.0, 8.0),
                      std::pow(10.0, gen.uniform(3.0, 10.0))});
  }
  return sp;
}

}  // namespace

TEST_CASE("solver equals the exhaustive oracle on random instances") {
  rng::Xoshiro256pp gen(2025);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sp = random_instance(gen, 12);
    const auto fast = assoc::solve_subproblem(sp);
    const auto exact = assoc::brute_force_subproblem(sp);
    const double scale = std::max({fast.value_bps, exact.value_bps, 1.0});
    CHECK(std::abs(fast.value_bps - exact.value_bps) / scale <= 1e-9);
  }
}

TEST_CASE("argmax invariance under common positive scaling") {
  rng::Xoshiro256pp gen(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto sp = random_instance(gen, 10);
    const auto base = assoc::solve_subproblem(sp);
    const double c = std::pow(10.0, gen.uniform(-2.0, 2.0));
    auto scaled = sp;
    for (auto& ue : scaled.ues) {
      ue.ce_macro *= c;
      ue.ce_small *= c;
      ue.demand *= c;
    }
    const auto result = assoc::solve_subproblem(scaled);
    CHECK(result.k == base.k);
    CHECK(result.on_macro == base.on_macro);
    CHECK(result.value_bps == doctest::Approx(base.value_bps * c).epsilon(1e-9));
  }
}

TEST_CASE("brute force guards its enumeration bound") {
  SubProblem sp;
  sp.ues.resize(21);
  CHECK_THROWS_AS(assoc::brute_force_subproblem(sp), std::invalid_argument);
}

namespace {

// A hand-built three-cell drop: per-UE link data without the channel stack.
assoc::DropLinks synthetic_drop(int n_ue, int n_small, std::uint64_t seed) {
  assoc::DropLinks links;
  links.w_macro_hz = 10e6;
  links.w_small_hz.assign(n_small, 2e9);
  rng::Xoshiro256pp gen(seed);
  for (int u = 0; u < n_ue; ++u) {
    assoc::UeLinks ue;
    ue.ue_id = u;
    ue.demand = std::pow(10.0, gen.uniform(4.0, 8.0));
    ue.macro_sector = static_cast<int>(gen.uniform_index(3));
    ue.macro_ce = gen.uniform(0.5, 6.0);
    ue.macro_sinr = std::pow(10.0, gen.uniform(-0.5, 2.0));
    for (int c = 0; c < n_small; ++c) {
      ue.small_ce.push_back(gen.uniform() < 0.3 ? 0.0 : gen.uniform(0.0, 7.0));
      ue.small_sinr.push_back(std::pow(10.0, gen.uniform(-2.0, 2.5)));
    }
    int best = -1;
    for (int c = 0; c < n_small; ++c) {
      if (best < 0 || ue.small_ce[c] > ue.small_ce[best]) best = c;
    }
    ue.best_small = best;
    links.ues.push_back(ue);
  }
  return links;
}

}  // namespace

TEST_CASE("max-SINR association") {
  SUBCASE("direct comparison") {
    assoc::DropLinks links;
    links.w_macro_hz = 10e6;
    links.w_small_hz = {2e9};
    assoc::UeLinks ue;
    ue.demand = 1e6;
    ue.macro_sinr = 10.0;   // 10 dB
    ue.macro_ce = 3.0;
    ue.small_sinr = {100.0};  // 20 dB
    ue.small_ce = {5.0};
    ue.best_small = 0;
    links.ues.push_back(ue);
    const auto a = assoc::associate_max_sinr(links);
    CHECK(a.per_ue[0].tier == assoc::Tier::small);
    CHECK(a.per_ue[0].cell == 0);
  }

  SUBCASE("macro wins ties") {
    assoc::DropLinks links;
    links.w_macro_hz = 10e6;
    links.w_small_hz = {2e9};
    assoc::UeLinks ue;
    ue.demand = 1e6;
    ue.macro_sinr = 10.0;
    ue.macro_ce = 3.0;
    ue.small_sinr = {10.0};
    ue.small_ce = {5.0};
    ue.best_small = 0;
    links.ues.push_back(ue);
    const auto a = assoc::associate_max_sinr(links);
    CHECK(a.per_ue[0].tier == assoc::Tier::macro);
  }

  SUBCASE("chosen SINR dominates every alternative on a random drop") {
    const auto links = synthetic_drop(200, 8, 77);
    const auto a = assoc::associate_max_sinr(links);
    for (std::size_t u = 0; u < links.ues.size(); ++u) {
      const auto& ue = links.ues[u];
      const double chosen = a.per_ue[u].tier == assoc::Tier::macro
                                ? ue.macro_sinr
                                : ue.small_sinr[a.per_ue[u].cell];
      CHECK(chosen >= ue.macro_sinr);
      for (double s : ue.small_sinr) CHECK(chosen >= s);
    }
  }
}

TEST_CASE("partition") {
  auto links = synthetic_drop(60, 3, 99);
  // Force a known area split: 10 / 20 / 30, everyone currently macro,
  // no permanent-macro users.
  for (int u = 0; u < 60; ++u) {
    auto& ue = links.ues[u];
    const int area = u < 10 ? 0 : (u < 30 ? 1 : 2);
    ue.best_small = area;
    for (int c = 0; c < 3; ++c) ue.small_ce[c] = c == area ? 2.0 : 0.5;
  }
  assoc::Assignment all_macro;
  all_macro.per_ue.assign(60, {assoc::Tier::macro, 0});
  all_macro.subproblem_k = {10, 20, 30};

  const auto subs = assoc::partition(links, all_macro);
  REQUIRE(subs.size() == 3);
  CHECK(subs[0].alpha_s == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(subs[1].alpha_s == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(subs[2].alpha_s == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(subs[0].ues.size() == 10);
  CHECK(subs[1].ues.size() == 20);
  CHECK(subs[2].ues.size() == 30);

  // Conservation: area macro counts plus permanents equal |M|.
  int covered = 0;
  for (const auto& sp : subs) covered += static_cast<int>(sp.ues.size());
  CHECK(covered == 60);

  // Single-area case: every UE indexed to one cell, alpha = 1.
  for (auto& ue : links.ues) ue.best_small = 0;
  const auto single = assoc::partition(links, all_macro);
  CHECK(single[0].alpha_s == 1.0);
  CHECK(single[0].ues.size() == 60);
  CHECK(single[1].ues.empty());
  CHECK(single[1].alpha_s == 0.0);
}

TEST_CASE("partition rejects |M| = 0 with permanent macro users") {
  auto links = synthetic_drop(4, 1, 5);
  links.ues[0].best_small = -1;  // permanently macro
  assoc::Assignment all_small;
  all_small.per_ue.assign(4, {assoc::Tier::small, 0});
  all_small.subproblem_k = {0};
  CHECK_THROWS_AS(assoc::partition(links, all_small), std::logic_error);
}

TEST_CASE("combinatorial association") {
  SUBCASE("homogeneous degenerate case equals max-SINR") {
    auto links = synthetic_drop(50, 0, 11);
    const auto a = assoc::associate_max_sinr(links);
    const auto b = assoc::associate_combinatorial(links, 10);
    REQUIRE(a.per_ue.size() == b.per_ue.size());
    for (std::size_t u = 0; u < a.per_ue.size(); ++u) {
      CHECK(a.per_ue[u].tier == b.per_ue[u].tier);
      CHECK(a.per_ue[u].cell == b.per_ue[u].cell);
    }
  }

  SUBCASE("system rate dominates max-SINR on a synthetic drop") {
    const auto links = synthetic_drop(30, 3, 42);
    const auto base = assoc::associate_max_sinr(links);
    const auto solved = assoc::associate_combinatorial(links, 10);
    CHECK(metrics::system_rate_bps(solved, links) >=
          metrics::system_rate_bps(base, links));
  }

  SUBCASE("fixed point is idempotent") {
    const auto links = synthetic_drop(40, 4, 314);
    const auto solved = assoc::associate_combinatorial(links, 25);
    REQUIRE(solved.converged);

    // One further sweep from the fixed point changes nothing.
    const auto subs = assoc::partition(links, solved);
    std::vector<int> cursor(subs.size(), 0);
    std::vector<assoc::SubProblemSolution> sols(subs.size());
    for (std::size_t s = 0; s < subs.size(); ++s) sols[s] = assoc::solve_subproblem(subs[s]);
    for (std::size_t u = 0; u < links.ues.size(); ++u) {
      const auto& ue = links.ues[u];
      if (ue.best_small < 0 || ue.small_ce[ue.best_small] <= 0.0) {
        CHECK(solved.per_ue[u].tier == assoc::Tier::macro);
        continue;
      }
      const bool on_macro = sols[ue.best_small].on_macro[cursor[ue.best_small]++];
      CHECK((solved.per_ue[u].tier == assoc::Tier::macro) == on_macro);
    }
  }

  SUBCASE("per-area k matches the returned assignment") {
    const auto links = synthetic_drop(80, 5, 2718);
    const auto solved = assoc::associate_combinatorial(links, 10);
    std::vector<int> count(links.w_small_hz.size(), 0);
    for (std::size_t u = 0; u < links.ues.size(); ++u) {
      const auto& ue = links.ues[u];
      if (ue.best_small < 0 || ue.small_ce[ue.best_small] <= 0.0) continue;
      if (solved.per_ue[u].tier == assoc::Tier::macro) ++count[ue.best_small];
    }
    for (std::size_t s = 0; s < count.size(); ++s) {
      CHECK(count[s] == solved.subproblem_k[s]);
    }
  }

  SUBCASE("subproblem-level dominance over the max-SINR feasible point") {
    const auto links = synthetic_drop(60, 4, 555);
    const auto init = assoc::associate_max_sinr(links);
    const auto subs = assoc::partition(links, init);
    for (const auto& sp : subs) {
      if (sp.ues.empty()) continue;
      const auto solved = assoc::solve_subproblem(sp);
      // Feasible point induced by max-SINR tiers.
      std::vector<bool> x(sp.ues.size());
      int k = 0;
      for (std::size_t i = 0; i < sp.ues.size(); ++i) {
        for (std::size_t u = 0; u < links.ues.size(); ++u) {
          if (links.ues[u].ue_id == sp.ues[i].ue_id) {
            x[i] = init.per_ue[u].tier == assoc::Tier::macro;
            break;
          }
        }
        if (x[i]) ++k;
      }
      double feasible = 0.0;
      for (std::size_t i = 0; i < sp.ues.size(); ++i) {
        if (x[i]) {
          feasible += std::min(sp.alpha_s * sp.w_macro_hz * sp.ues[i].ce_macro / k,
                               sp.ues[i].demand);
        } else {
          feasible += std::min(
              sp.w_small_hz * sp.ues[i].ce_small / (sp.ues.size() - k), sp.ues[i].demand);
        }
      }
      CHECK(solved.value_bps >= feasible - 1e-9 * std::max(1.0, feasible));
    }
  }
}

TEST_CASE("subproblem fixtures round-trip through json") {
  const auto sp = worked_example();
  const auto text = assoc::subproblem_to_json(sp);
  const auto back = assoc::subproblem_from_json(text);
  CHECK(back.small_cell_id == sp.small_cell_id);
  CHECK(back.alpha_s == sp.alpha_s);
  CHECK(back.w_macro_hz == sp.w_macro_hz);
  CHECK(back.w_small_hz == sp.w_small_hz);
  REQUIRE(back.ues.size() == sp.ues.size());
  for (std::size_t i = 0; i < sp.ues.size(); ++i) {
    CHECK(back.ues[i].ce_macro == sp.ues[i].ce_macro);
    CHECK(back.ues[i].ce_small == sp.ues[i].ce_small);
    CHECK(back.ues[i].demand == sp.ues[i].demand);
  }
  CHECK(assoc::solve_subproblem(back).value_bps ==
        doctest::Approx(assoc::solve_subproblem(sp).value_bps).epsilon(1e-15));
}
