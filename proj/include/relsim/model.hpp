#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace relsim {

using Id = std::uint32_t;

/// Static description of one busbar. Every bus belongs to exactly one
/// control area.
struct Bus {
  Id id = 0;
  Id area_id = 0;
};

struct Line {
  Id id = 0;
  Id from_bus = 0;
  Id to_bus = 0;
  double reactance_pu = 0.0;     // series reactance, per-unit on the system base
  double rating_mw = 0.0;        // continuous rating
  double failure_rate_y = 0.0;   // permanent outages per year
  double repair_rate_h = 0.0;    // repairs per hour
  double reclose_delay_h = 0.0;  // delay until a manual reclose attempt
  Id responsible_area = 0;       // operator in charge (relevant for tie-lines)
};

struct Generator {
  Id id = 0;
  Id bus = 0;
  double capacity_mw = 0.0;
  int priority = 1;  // 1 = dispatched first
  double failure_rate_y = 0.0;
  double repair_rate_h = 0.0;
};

struct Load {
  Id id = 0;
  Id bus = 0;
  double peak_mw = 0.0;
};

struct ControlArea {
  Id id = 0;
  double contact_delay_min = 2.0;    // operator-to-operator contact delay
  double response_delay_min = 15.0;  // time to find a corrective solution
};

/// Global model parameters with their default values.
struct Params {
  double beta = 1.4;            // outage-threshold span factor
  double eta = 0.9;             // reconnection angle margin
  double xi = 0.8;              // post-corrective flow margin
  double shed_weight = 1.0e4;   // relative cost of shedding vs redispatch
  double demand_sigma = 0.0192; // std of the hourly demand deviation
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

/// Immutable network description. Dynamic status (in/out of service,
/// outputs, shed amounts) lives in SystemState so that concurrent
/// replications can share one model instance.
class NetworkModel {
 public:
  double base_mva = 100.0;
  Params params;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<Load> loads;
  std::vector<ControlArea> areas;

  /// Builds the index maps and adjacency lists. Must be called after the
  /// component vectors are filled and before any topology query.
  void finalize();

  int n_buses() const { return static_cast<int>(buses.size()); }
  int n_lines() const { return static_cast<int>(lines.size()); }
  int n_generators() const { return static_cast<int>(generators.size()); }
  int n_loads() const { return static_cast<int>(loads.size()); }
  int n_areas() const { return static_cast<int>(areas.size()); }

  // Index lookups; -1 when the id is unknown.
  int bus_index(Id id) const;
  int line_index(Id id) const;
  int area_index(Id id) const;

  int line_from(int line_idx) const { return line_from_[line_idx]; }
  int line_to(int line_idx) const { return line_to_[line_idx]; }
  int gen_bus(int gen_idx) const { return gen_bus_[gen_idx]; }
  int load_bus(int load_idx) const { return load_bus_[load_idx]; }
  int bus_area(int bus_idx) const { return bus_area_[bus_idx]; }

  const std::vector<int>& lines_at_bus(int bus_idx) const { return bus_lines_[bus_idx]; }
  const std::vector<int>& gens_at_bus(int bus_idx) const { return bus_gens_[bus_idx]; }
  const std::vector<int>& loads_at_bus(int bus_idx) const { return bus_loads_[bus_idx]; }

  bool is_tie_line(int line_idx) const {
    return bus_area_[line_from_[line_idx]] != bus_area_[line_to_[line_idx]];
  }
  /// Other endpoint of a line, seen from bus_idx.
  int line_other_end(int line_idx, int bus_idx) const {
    return line_from_[line_idx] == bus_idx ? line_to_[line_idx] : line_from_[line_idx];
  }

  /// FNV-1a hash of the canonical serialized form; recorded in output headers.
  std::uint64_t content_hash() const;

 private:
  std::vector<int> line_from_, line_to_;
  std::vector<int> gen_bus_, load_bus_;
  std::vector<int> bus_area_;
  std::vector<std::vector<int>> bus_lines_, bus_gens_, bus_loads_;
};

/// Checks the structural invariants (unique ids, resolvable references,
/// positive ratings and rates, parameter ranges). Report-style: an empty
/// issue list means the model is well-formed.
ValidationReport validate(const NetworkModel& model);

/// Partition of the bus set into electrical islands.
struct Islands {
  std::vector<std::vector<int>> groups;  // bus indices, each group sorted
  std::vector<int> island_of;            // bus index -> group index

  int count() const { return static_cast<int>(groups.size()); }
};

/// Equivalence classes of "connected via an in-service line".
/// Groups are ordered by their smallest bus index so the result is
/// deterministic for a given mask.
Islands connected_components(const NetworkModel& model,
                             const std::vector<bool>& line_in_service);

/// Scales peak demands and generator capacities by the loading level L.
NetworkModel apply_loading_level(const NetworkModel& model, double level);

}  // namespace relsim
