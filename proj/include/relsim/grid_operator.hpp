#pragma once

#include "relsim/events.hpp"
#include "relsim/opf.hpp"
#include "relsim/state.hpp"

namespace relsim {

struct OperatorConfig {
  bool enabled = true;
  double response_override_min = -1.0;  // overrides every area's delay when >= 0
};

double area_contact_delay_min(const NetworkModel& model, int area_idx);
double area_response_delay_min(const NetworkModel& model, int area_idx,
                               const OperatorConfig& config);

/// Area index of the operator responsible for a line: the line's own area,
/// or for tie-lines the area named in the network file (defaulting to the
/// lower-numbered one).
int responsible_area_index(const NetworkModel& model, int line_idx);

/// Reaction to a fresh overload alarm. For a tie-line both neighboring
/// operators are alarmed and the corrective action runs after the contact
/// delay plus the solution-finding delay; an intra-area overload skips the
/// contact phase.
void operator_on_alarm(SystemState& state, EventQueue& queue, const OperatorConfig& config,
                       int line_idx, double t);

/// Drops the pending procedure for a line (alarm cleared or line tripped).
/// Generator outputs and load states are left untouched.
void operator_cancel(SystemState& state, EventQueue& queue, int line_idx);

void operator_contact_done(SystemState& state, int line_idx);

/// Closes out the procedure at solution time. Returns true if it was still
/// active (the corrective action should execute).
bool operator_solution_due(SystemState& state, int line_idx);

/// Builds and solves the corrective LP for the line and applies the result
/// to generator outputs and load shed amounts (cause: operator
/// intervention). Returns the solution; infeasible leaves the state
/// untouched so the protection outcome proceeds.
CorrectiveLpSolution execute_corrective_action(SystemState& state, int line_idx,
                                               const SensitivityFactors& sensitivities,
                                               double t);

}  // namespace relsim
