#include "relsim/splitting.hpp"

#include <stdexcept>

namespace relsim {

void disconnect_load(SystemState& state, int load_idx, OutageCause cause, double t) {
  LoadState& ls = state.loads[load_idx];
  ls.transition(LoadFsm::Disconnected);
  ls.shed_mw = 0.0;
  ls.disconnect_time_h = t;
  ls.disconnect_cause = cause;
  state.restoration.waiting.push_back(load_idx);
}

std::vector<int> shed_until_feasible(SystemState& state, const std::vector<int>& island_buses,
                                     OutageCause cause, double t, RngStream& rng) {
  const NetworkModel& model = *state.model;
  auto [capacity, demand] = island_balance(model, state, island_buses);

  std::vector<int> candidates;
  for (int bus : island_buses)
    for (int i : model.loads_at_bus(bus))
      if (state.load_is_connected(i)) candidates.push_back(i);

  std::vector<int> disconnected;
  double last_demand = 0.0;
  while (demand > capacity + 1e-9 && !candidates.empty()) {
    const std::uint32_t pick = rng.uniform_below(static_cast<std::uint32_t>(candidates.size()));
    const int load_idx = candidates[pick];
    candidates.erase(candidates.begin() + pick);
    last_demand = state.load_current_demand(load_idx);
    disconnect_load(state, load_idx, cause, t);
    demand -= last_demand;
    disconnected.push_back(load_idx);
  }
  // Minimality for the drawn order: re-adding the final pick must
  // re-violate the balance.
  if (!disconnected.empty() && demand + last_demand <= capacity + 1e-9)
    throw std::logic_error("disconnected more load than the imbalance required");
  return disconnected;
}

SplitEvent handle_split(SystemState& state, const Islands& before, const Islands& after,
                        double t, RngStream& rng) {
  const NetworkModel& model = *state.model;
  SplitEvent event;
  event.time_h = t;

  for (const auto& group : after.groups) {
    // A child of a split: all members share one former island that was
    // strictly larger.
    const int parent = before.island_of[group.front()];
    bool same_parent = true;
    for (int bus : group)
      if (before.island_of[bus] != parent) {
        same_parent = false;
        break;
      }
    if (!same_parent || before.groups[parent].size() == group.size()) continue;

    ++event.n_children;
    auto [capacity, demand] = island_balance(model, state, group);
    if (demand > capacity + 1e-9) {
      for (int i : shed_until_feasible(state, group, OutageCause::SystemSplitting, t, rng)) {
        event.disconnected_loads.push_back(i);
      }
      auto [cap2, dem2] = island_balance(model, state, group);
      event.disconnected_mw += demand - dem2;
    } else if (capacity > demand) {
      event.generation_excess_mw += capacity - demand;
    }
  }
  return event;
}

}  // namespace relsim
