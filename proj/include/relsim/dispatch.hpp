#pragma once

#include <vector>

#include "relsim/model.hpp"

namespace relsim {

struct DispatchResult {
  std::vector<double> output_mw;           // per generator; 0 for unavailable units
  std::vector<double> island_unserved_mw;  // demand an island's units cannot cover
  double unserved_mw = 0.0;
  bool feasible = true;  // true iff every island's demand is fully covered
};

/// Priority-list commitment for one set of units: fills the target tier by
/// tier (priority 1 first), splitting each tier's share equally among its
/// units and redistributing within the tier as units hit their capacity.
/// Writes the assigned output of every listed unit into output_mw.
void priority_fill(const NetworkModel& model, const std::vector<int>& units, double target_mw,
                   std::vector<double>& output_mw);

/// Generation-load balancing across all islands. Each control area first
/// covers its own connected demand; a deficit is covered by the other
/// areas of the same island (largest available surplus first). Demand no
/// island capacity can cover is reported as unserved.
DispatchResult dispatch(const NetworkModel& model, const Islands& islands,
                        const std::vector<double>& load_demand_mw,
                        const std::vector<bool>& load_connected,
                        const std::vector<bool>& gen_available);

}  // namespace relsim
