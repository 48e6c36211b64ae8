#pragma once

#include <array>
#include <vector>

#include "relsim/components.hpp"
#include "relsim/model.hpp"
#include "relsim/stats.hpp"

namespace relsim {

enum class OperatorFsm : int { Idle, Alarmed, Contacting, FindingSolution, Executing };

/// One overload-handling procedure, tied to the alarmed line.
struct OperatorProcedure {
  bool active = false;
  bool tie_line = false;
  double alarm_time_h = 0.0;
  int responsible_area = -1;  // area index
  EventId contact_event = kNoEvent;
  EventId solution_event = kNoEvent;
};

struct OperatorState {
  OperatorFsm fsm = OperatorFsm::Idle;
  std::vector<int> pending_alarms;  // line indices, alarm order
};

/// Unserved-energy bookkeeping between events. Power is piecewise constant,
/// so the energy integral is a sum of power * dt slices.
struct AccountingState {
  double last_time_h = 0.0;
  std::array<double, kNumCauses> unserved_power_mw{};
  bool record_open = false;
  BlackoutRecord open_record;
  double total_energy_mwh = 0.0;  // cause-free integral, kept as a cross-check
};

/// Complete dynamic state of one replication. Owned by a single thread.
struct SystemState {
  const NetworkModel* model = nullptr;
  double clock_h = 0.0;
  int hour = 0;
  std::vector<double> gamma;  // per area, current profile value
  std::vector<double> rho;    // per area, current stochastic deviation

  std::vector<GeneratorState> gens;
  std::vector<LineState> lines;
  std::vector<LoadState> loads;
  std::vector<OperatorState> operators;     // per area
  std::vector<OperatorProcedure> procedures;  // per line
  RestorationQueue restoration;

  Islands islands;
  std::vector<double> theta;    // last flow solution (warm start)
  std::vector<double> flow_mw;  // per line
  AccountingState acct;

  void init(const NetworkModel& m);

  std::vector<bool> line_service_mask() const;
  std::vector<bool> gen_available() const;
  std::vector<bool> load_connected_mask() const;
  std::vector<double> load_demands() const;

  bool load_is_connected(int load_idx) const {
    const LoadFsm f = loads[load_idx].fsm;
    return f == LoadFsm::Connected || f == LoadFsm::PartiallyShed;
  }
  /// Demand the load draws right now (0 when disconnected).
  double load_current_demand(int load_idx) const;
  /// Demand the load would draw if it were connected with no shedding.
  double load_hypothetical_demand(int load_idx) const;
};

/// (available capacity, connected demand) of one island: the sum of
/// in-service generator capacities and of current connected-load demands.
std::pair<double, double> island_balance(const NetworkModel& model, const SystemState& state,
                                         const std::vector<int>& island_buses);

}  // namespace relsim
