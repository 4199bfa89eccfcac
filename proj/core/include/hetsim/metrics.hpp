#pragma once

#include <vector>

#include "hetsim/association.hpp"

namespace hetsim::metrics {

// System rate of one assignment (evaluated macro cell only): every user gets
// its cell's equal bandwidth share times its link spectral efficiency, clipped
// by its own demand.
struct RateReport {
  std::vector<double> per_ue_rate_bps;
  double system_rate_bps = 0.0;
  int macro_user_count = 0;
  std::vector<int> small_cell_user_counts;
  double gain = 1.0;  // vs. homogeneous baseline; filled by the harness
};

RateReport system_rate(const assoc::Assignment& assignment,
                       const assoc::DropLinks& links);

// Convenience: just the scalar objective.
double system_rate_bps(const assoc::Assignment& assignment,
                       const assoc::DropLinks& links);

// r / r_homogeneous. Throws on a non-positive baseline.
double rate_gain(double r_bps, double r_homogeneous_bps);

}  // namespace hetsim::metrics
