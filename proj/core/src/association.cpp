#include "hetsim/association.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hetsim/metrics.hpp"

namespace hetsim::assoc {

IndexChoice allocate_indices_for_ue(const std::vector<double>& macro_ce,
                                    const std::vector<double>& small_ce) {
  if (macro_ce.empty()) throw std::invalid_argument("allocate_indices: empty macro set");
  IndexChoice choice;
  choice.macro_index = 0;
  for (std::size_t m = 1; m < macro_ce.size(); ++m) {
    if (macro_ce[m] > macro_ce[choice.macro_index]) choice.macro_index = static_cast<int>(m);
  }
  choice.small_index = -1;
  for (std::size_t s = 0; s < small_ce.size(); ++s) {
    if (choice.small_index < 0 || small_ce[s] > small_ce[choice.small_index]) {
      choice.small_index = static_cast<int>(s);
    }
  }
  return choice;
}

std::vector<bool> topk_select(const std::vector<double>& f, int k) {
  const int n = static_cast<int>(f.size());
  if (k < 0 || k > n) throw std::invalid_argument("topk_select: k out of range");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&f](int a, int b) { return f[a] > f[b]; });
  std::vector<bool> selected(n, false);
  for (int i = 0; i < k; ++i) selected[order[i]] = true;
  return selected;
}

namespace {

double clip(double share, double demand) { return std::min(share, demand); }

// R_s of a concrete (k, x) split; denominators never vanish because each
// term's user is counted in its own side.
double subproblem_objective(const SubProblem& sp, const std::vector<bool>& on_macro,
                            int k) {
  const int u_total = static_cast<int>(sp.ues.size());
  const int n_small = u_total - k;
  double value = 0.0;
  for (int u = 0; u < u_total; ++u) {
    const auto& ue = sp.ues[u];
    if (on_macro[u]) {
      value += clip(sp.alpha_s * sp.w_macro_hz * ue.ce_macro / k, ue.demand);
    } else {
      value += clip(sp.w_small_hz * ue.ce_small / n_small, ue.demand);
    }
  }
  return value;
}

}  // namespace

SubProblemSolution solve_subproblem(const SubProblem& sp) {
  const int u_total = static_cast<int>(sp.ues.size());
  SubProblemSolution best;
  best.k = 0;
  best.on_macro.assign(u_total, false);
  best.value_bps = 0.0;
  if (u_total == 0) return best;

  // k = 0: everyone on the small cell.
  best.value_bps = subproblem_objective(sp, best.on_macro, 0);

  std::vector<double> f(u_total);
  for (int k = 1; k < u_total; ++k) {
    const double macro_share = sp.alpha_s * sp.w_macro_hz / k;
    const double small_share = sp.w_small_hz / (u_total - k);
    double a_k = 0.0;
    for (int u = 0; u < u_total; ++u) {
      const auto& ue = sp.ues[u];
      const double small_term = clip(small_share * ue.ce_small, ue.demand);
      f[u] = clip(macro_share * ue.ce_macro, ue.demand) - small_term;
      a_k += small_term;
    }
    auto x = topk_select(f, k);
    double value = a_k;
    for (int u = 0; u < u_total; ++u) {
      if (x[u]) value += f[u];
    }
    if (value > best.value_bps) {
      best.k = k;
      best.on_macro = std::move(x);
      best.value_bps = value;
    }
  }

  // k = U: everyone on macro.
  {
    std::vector<bool> all_macro(u_total, true);
    const double value = subproblem_objective(sp, all_macro, u_total);
    if (value > best.value_bps) {
      best.k = u_total;
      best.on_macro = std::move(all_macro);
      best.value_bps = value;
    }
  }
  return best;
}

SubProblemSolution brute_force_subproblem(const SubProblem& sp) {
  const int u_total = static_cast<int>(sp.ues.size());
  if (u_total > 20) throw std::invalid_argument("brute_force_subproblem: U too large");

  SubProblemSolution best;
  best.k = 0;
  best.on_macro.assign(u_total, false);
  best.value_bps = subproblem_objective(sp, best.on_macro, 0);
  if (u_total == 0) {
    best.value_bps = 0.0;
    return best;
  }

  std::vector<bool> x(u_total);
  for (std::uint32_t mask = 1; mask < (1u << u_total); ++mask) {
    const int k = std::popcount(mask);
    for (int u = 0; u < u_total; ++u) x[u] = (mask >> u) & 1u;
    const double value = subproblem_objective(sp, x, k);
    // Value ties resolve to the smaller k, matching the solver.
    if (value > best.value_bps || (value == best.value_bps && k < best.k)) {
      best.k = k;
      best.on_macro = x;
      best.value_bps = value;
    }
  }
  return best;
}

int Assignment::macro_count() const {
  int count = 0;
  for (const auto& choice : per_ue) {
    if (choice.tier == Tier::macro) ++count;
  }
  return count;
}

namespace {

bool permanently_macro(const UeLinks& ue) {
  return ue.best_small < 0 || ue.small_ce[ue.best_small] <= 0.0;
}

}  // namespace

Assignment associate_max_sinr(const DropLinks& links) {
  Assignment out;
  out.per_ue.resize(links.ues.size());
  out.subproblem_k.assign(links.w_small_hz.size(), 0);
  for (std::size_t i = 0; i < links.ues.size(); ++i) {
    const auto& ue = links.ues[i];
    Assignment::Choice choice;
    choice.tier = Tier::macro;
    choice.cell = ue.macro_sector;
    double best_sinr = ue.macro_sinr;  // ties prefer macro
    for (std::size_t s = 0; s < ue.small_sinr.size(); ++s) {
      if (ue.small_sinr[s] > best_sinr) {
        best_sinr = ue.small_sinr[s];
        choice.tier = Tier::small;
        choice.cell = static_cast<int>(s);
      }
    }
    out.per_ue[i] = choice;
  }
  // Subproblem k fields mirror the per-area macro counts of this assignment.
  for (std::size_t i = 0; i < links.ues.size(); ++i) {
    const auto& ue = links.ues[i];
    if (!permanently_macro(ue) && out.per_ue[i].tier == Tier::macro) {
      ++out.subproblem_k[ue.best_small];
    }
  }
  return out;
}

std::vector<SubProblem> partition(const DropLinks& links, const Assignment& current) {
  const int macro_total = current.macro_count();
  int permanent = 0;
  for (const auto& ue : links.ues) {
    if (permanently_macro(ue)) ++permanent;
  }
  if (macro_total == 0 && permanent > 0) {
    throw std::logic_error("partition: |M| = 0 with permanent macro users");
  }

  std::vector<SubProblem> subs(links.w_small_hz.size());
  for (std::size_t s = 0; s < subs.size(); ++s) {
    subs[s].small_cell_id = static_cast<int>(s);
    subs[s].w_macro_hz = links.w_macro_hz;
    subs[s].w_small_hz = links.w_small_hz[s];
  }

  std::vector<int> macro_in_area(subs.size(), 0);
  for (std::size_t i = 0; i < links.ues.size(); ++i) {
    const auto& ue = links.ues[i];
    if (permanently_macro(ue)) continue;
    const int area = ue.best_small;
    subs[area].ues.push_back(
        {ue.ue_id, ue.macro_ce, ue.small_ce[area], ue.demand});
    if (current.per_ue[i].tier == Tier::macro) ++macro_in_area[area];
  }
  for (std::size_t s = 0; s < subs.size(); ++s) {
    subs[s].alpha_s = macro_total > 0
                          ? static_cast<double>(macro_in_area[s]) / macro_total
                          : 0.0;
  }
  return subs;
}

Assignment associate_combinatorial(const DropLinks& links, int max_iters) {
  Assignment current = associate_max_sinr(links);
  if (links.w_small_hz.empty()) return current;  // homogeneous: nothing to solve

  // ue index -> position within its area's subproblem ue list (stable across
  // iterations because partition keeps UE order).
  Assignment best = current;
  double best_rate = metrics::system_rate_bps(current, links);
  bool converged = false;
  int iterations = 0;

  for (int iter = 0; iter < max_iters && !converged; ++iter) {
    ++iterations;
    auto subs = partition(links, current);

    Assignment next;
    next.per_ue.resize(links.ues.size());
    next.subproblem_k.assign(subs.size(), 0);
    std::vector<SubProblemSolution> solutions(subs.size());
    for (std::size_t s = 0; s < subs.size(); ++s) {
      solutions[s] = solve_subproblem(subs[s]);
      next.subproblem_k[s] = solutions[s].k;
    }

    std::vector<int> cursor(subs.size(), 0);
    for (std::size_t i = 0; i < links.ues.size(); ++i) {
      const auto& ue = links.ues[i];
      if (permanently_macro(ue)) {
        next.per_ue[i] = {Tier::macro, ue.macro_sector};
        continue;
      }
      const int area = ue.best_small;
      const bool on_macro = solutions[area].on_macro[cursor[area]++];
      next.per_ue[i] =
          on_macro ? Assignment::Choice{Tier::macro, ue.macro_sector}
                   : Assignment::Choice{Tier::small, area};
    }

    converged = true;
    for (std::size_t i = 0; i < links.ues.size(); ++i) {
      if (next.per_ue[i].tier != current.per_ue[i].tier ||
          next.per_ue[i].cell != current.per_ue[i].cell) {
        converged = false;
        break;
      }
    }

    const double rate = metrics::system_rate_bps(next, links);
    if (rate > best_rate) {
      best_rate = rate;
      best = next;
    }
    current = std::move(next);
  }

  best.iterations = iterations;
  best.converged = converged;
  return best;
}

std::string subproblem_to_json(const SubProblem& sp) {
  nlohmann::json j;
  j["small_cell_id"] = sp.small_cell_id;
  j["alpha_s"] = sp.alpha_s;
  j["w_macro_hz"] = sp.w_macro_hz;
  j["w_small_hz"] = sp.w_small_hz;
  j["ues"] = nlohmann::json::array();
  for (const auto& ue : sp.ues) {
    j["ues"].push_back({{"ue_id", ue.ue_id},
                        {"ce_macro", ue.ce_macro},
                        {"ce_small", ue.ce_small},
                        {"demand", ue.demand}});
  }
  return j.dump(2);
}

SubProblem subproblem_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SubProblem sp;
  sp.small_cell_id = j.at("small_cell_id").get<int>();
  sp.alpha_s = j.at("alpha_s").get<double>();
  sp.w_macro_hz = j.at("w_macro_hz").get<double>();
  sp.w_small_hz = j.at("w_small_hz").get<double>();
  for (const auto& ue : j.at("ues")) {
    sp.ues.push_back({ue.at("ue_id").get<int>(), ue.at("ce_macro").get<double>(),
                      ue.at("ce_small").get<double>(), ue.at("demand").get<double>()});
  }
  return sp;
}

}  // namespace hetsim::assoc
