#pragma once

#include <string>
#include <vector>

#include "hetsim/band.hpp"
#include "hetsim/config.hpp"

namespace hetsim::validate {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // measured values for the report
};

struct Report {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

// Function-under-test hooks let the unit tests exercise the battery's
// failure detection with corrupted models.
using PathLossFn = double (*)(Band, double, double);

// Individual checks (all pure, deterministic).
CheckResult check_pl60_branch_continuity(PathLossFn pl);
CheckResult check_path_loss_monotonicity(PathLossFn pl);
CheckResult check_rician_fit_monotonicity();
CheckResult check_fading_moments();
CheckResult check_traffic_calibration();
CheckResult check_demand_tail();
CheckResult check_solver_oracle_campaign(int n_instances = 1000, int max_users = 12);
CheckResult check_topk_enumeration();
CheckResult check_scaling_ratios();
CheckResult check_array_budget_constant();
CheckResult check_drop_invariants(const SimConfig& config);

// The full invariant battery over the given configuration.
Report run_battery(const SimConfig& config);

}  // namespace hetsim::validate
