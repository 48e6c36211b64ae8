#pragma once

#include <vector>

#include "relsim/rng.hpp"
#include "relsim/state.hpp"

namespace relsim {

struct SplitEvent {
  double time_h = 0.0;
  int n_children = 0;
  std::vector<int> disconnected_loads;
  double disconnected_mw = 0.0;
  double generation_excess_mw = 0.0;  // curtailed by the following redispatch
};

/// Fully disconnects one load: clears any partial shed, tags the cause and
/// time, and appends it to the restoration queue.
void disconnect_load(SystemState& state, int load_idx, OutageCause cause, double t);

/// Disconnects uniformly-random connected loads of the island, one at a
/// time, until its demand no longer exceeds the available capacity.
/// Returns the disconnected load indices in pick order.
std::vector<int> shed_until_feasible(SystemState& state, const std::vector<int>& island_buses,
                                     OutageCause cause, double t, RngStream& rng);

/// Imbalance handling after a network separation: each child island with a
/// demand excess loses a minimum number of randomly selected loads; a
/// generation excess is removed by the subsequent redispatch with no load
/// outage.
SplitEvent handle_split(SystemState& state, const Islands& before, const Islands& after,
                        double t, RngStream& rng);

}  // namespace relsim
