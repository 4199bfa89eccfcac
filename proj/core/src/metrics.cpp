#include "hetsim/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace hetsim::metrics {

RateReport system_rate(const assoc::Assignment& assignment,
                       const assoc::DropLinks& links) {
  if (assignment.per_ue.size() != links.ues.size()) {
    throw std::invalid_argument("system_rate: assignment does not match drop");
  }
  RateReport report;
  report.per_ue_rate_bps.assign(links.ues.size(), 0.0);
  report.small_cell_user_counts.assign(links.w_small_hz.size(), 0);

  for (std::size_t i = 0; i < links.ues.size(); ++i) {
    const auto& choice = assignment.per_ue[i];
    if (choice.tier == assoc::Tier::macro) {
      ++report.macro_user_count;
    } else {
      if (choice.cell < 0 ||
          choice.cell >= static_cast<int>(report.small_cell_user_counts.size())) {
        throw std::invalid_argument("system_rate: assignment references unknown cell");
      }
      ++report.small_cell_user_counts[choice.cell];
    }
  }

  for (std::size_t i = 0; i < links.ues.size(); ++i) {
    const auto& ue = links.ues[i];
    const auto& choice = assignment.per_ue[i];
    double share;
    if (choice.tier == assoc::Tier::macro) {
      share = links.w_macro_hz * ue.macro_ce / report.macro_user_count;
    } else {
      share = links.w_small_hz[choice.cell] * ue.small_ce[choice.cell] /
              report.small_cell_user_counts[choice.cell];
    }
    report.per_ue_rate_bps[i] = std::min(share, ue.demand);
    report.system_rate_bps += report.per_ue_rate_bps[i];
  }
  return report;
}

double system_rate_bps(const assoc::Assignment& assignment,
                       const assoc::DropLinks& links) {
  return system_rate(assignment, links).system_rate_bps;
}

double rate_gain(double r_bps, double r_homogeneous_bps) {
  if (r_homogeneous_bps <= 0.0) {
    throw std::invalid_argument("rate_gain: baseline must be > 0");
  }
  return r_bps / r_homogeneous_bps;
}

}  // namespace hetsim::metrics
