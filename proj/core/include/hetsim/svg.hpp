#pragma once

#include <string>
#include <vector>

#include "hetsim/sim.hpp"

namespace hetsim::svg {

// Line chart of mean system-rate gain vs. small-cell count, one series per
// (method, band, traffic mean), log-scaled y axis. Failed rows are skipped.
std::string gain_chart(const std::vector<sim::SweepRow>& rows);

}  // namespace hetsim::svg
