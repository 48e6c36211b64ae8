#include "relsim/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace relsim {

void priority_fill(const NetworkModel& model, const std::vector<int>& units, double target_mw,
                   std::vector<double>& output_mw) {
  for (int g : units) output_mw[g] = 0.0;
  if (target_mw <= 0) return;

  std::map<int, std::vector<int>> tiers;  // priority -> units, ordered
  for (int g : units) tiers[model.generators[g].priority].push_back(g);

  double remaining = target_mw;
  for (auto& [priority, tier] : tiers) {
    if (remaining <= 0) break;
    // Sorting by capacity lets a single pass cap the small units and split
    // the rest equally among the others.
    std::sort(tier.begin(), tier.end(), [&](int a, int b) {
      const double ca = model.generators[a].capacity_mw;
      const double cb = model.generators[b].capacity_mw;
      return ca != cb ? ca < cb : a < b;
    });
    double tier_cap = 0.0;
    for (int g : tier) tier_cap += model.generators[g].capacity_mw;
    double share = std::min(remaining, tier_cap);
    remaining -= share;
    int left = static_cast<int>(tier.size());
    for (int g : tier) {
      const double level = share / left;
      const double cap = model.generators[g].capacity_mw;
      const double take = std::min(cap, level);
      output_mw[g] = take;
      share -= take;
      --left;
    }
  }
}

DispatchResult dispatch(const NetworkModel& model, const Islands& islands,
                        const std::vector<double>& load_demand_mw,
                        const std::vector<bool>& load_connected,
                        const std::vector<bool>& gen_available) {
  DispatchResult result;
  result.output_mw.assign(model.n_generators(), 0.0);
  result.island_unserved_mw.assign(islands.groups.size(), 0.0);

  struct AreaSlice {
    std::vector<int> units;
    double demand = 0.0;
    double capacity = 0.0;
    double target = 0.0;
  };

  for (size_t isl = 0; isl < islands.groups.size(); ++isl) {
    std::map<int, AreaSlice> areas;  // area index -> this island's slice
    for (int bus : islands.groups[isl]) {
      AreaSlice& slice = areas[model.bus_area(bus)];
      for (int g : model.gens_at_bus(bus)) {
        if (!gen_available[g]) continue;
        slice.units.push_back(g);
        slice.capacity += model.generators[g].capacity_mw;
      }
      for (int i : model.loads_at_bus(bus))
        if (load_connected[i]) slice.demand += load_demand_mw[i];
    }

    // Own demand first, capped by own capacity.
    for (auto& [area, slice] : areas) slice.target = std::min(slice.demand, slice.capacity);

    // Cross-area assistance: remaining deficits are covered by the other
    // areas of the island, largest available surplus first.
    double island_unserved = 0.0;
    for (auto& [area, slice] : areas) {
      double deficit = slice.demand - slice.target;
      if (deficit <= 0) continue;
      std::vector<std::pair<double, int>> donors;  // (-surplus, area) for ordering
      for (auto& [other, os] : areas) {
        if (other == area) continue;
        const double surplus = os.capacity - os.target;
        if (surplus > 0) donors.emplace_back(-surplus, other);
      }
      std::sort(donors.begin(), donors.end());
      for (auto& [neg_surplus, donor] : donors) {
        if (deficit <= 0) break;
        AreaSlice& ds = areas[donor];
        const double take = std::min(deficit, ds.capacity - ds.target);
        ds.target += take;
        deficit -= take;
      }
      island_unserved += std::max(0.0, deficit);
    }

    for (auto& [area, slice] : areas) priority_fill(model, slice.units, slice.target, result.output_mw);

    result.island_unserved_mw[isl] = island_unserved;
    result.unserved_mw += island_unserved;
  }
  result.feasible = result.unserved_mw <= 1e-9;
  return result;
}

}  // namespace relsim
