#include "relsim/grid_operator.hpp"

#include <algorithm>

namespace relsim {

namespace {

void forget_alarm(OperatorState& op, int line_idx) {
  op.pending_alarms.erase(std::remove(op.pending_alarms.begin(), op.pending_alarms.end(), line_idx),
                          op.pending_alarms.end());
  if (op.pending_alarms.empty()) op.fsm = OperatorFsm::Idle;
}

}  // namespace

double area_contact_delay_min(const NetworkModel& model, int area_idx) {
  return model.areas[area_idx].contact_delay_min;
}

double area_response_delay_min(const NetworkModel& model, int area_idx,
                               const OperatorConfig& config) {
  if (config.response_override_min >= 0) return config.response_override_min;
  return model.areas[area_idx].response_delay_min;
}

int responsible_area_index(const NetworkModel& model, int line_idx) {
  const Line& line = model.lines[line_idx];
  const int area_from = model.bus_area(model.line_from(line_idx));
  const int area_to = model.bus_area(model.line_to(line_idx));
  if (area_from == area_to) return area_from;
  if (line.responsible_area != 0) {
    const int named = model.area_index(line.responsible_area);
    if (named >= 0) return named;
  }
  // Default rule: the lower-numbered area takes charge.
  return model.areas[area_from].id < model.areas[area_to].id ? area_from : area_to;
}

void operator_on_alarm(SystemState& state, EventQueue& queue, const OperatorConfig& config,
                       int line_idx, double t) {
  if (!config.enabled) return;
  const NetworkModel& model = *state.model;
  OperatorProcedure& proc = state.procedures[line_idx];
  if (proc.active) return;  // one procedure per line

  const bool tie = model.is_tie_line(line_idx);
  const int responsible = responsible_area_index(model, line_idx);
  proc.active = true;
  proc.tie_line = tie;
  proc.alarm_time_h = t;
  proc.responsible_area = responsible;

  const double response_h = area_response_delay_min(model, responsible, config) / 60.0;
  if (tie) {
    const double contact_h = area_contact_delay_min(model, responsible) / 60.0;
    proc.contact_event = queue.schedule(t + contact_h, EventKind::OperatorContactDone, line_idx);
    proc.solution_event =
        queue.schedule(t + contact_h + response_h, EventKind::OperatorSolutionDone, line_idx);
    const int other_area = model.bus_area(model.line_from(line_idx)) == responsible
                               ? model.bus_area(model.line_to(line_idx))
                               : model.bus_area(model.line_from(line_idx));
    state.operators[responsible].fsm = OperatorFsm::Contacting;
    state.operators[responsible].pending_alarms.push_back(line_idx);
    state.operators[other_area].fsm = OperatorFsm::Alarmed;
    state.operators[other_area].pending_alarms.push_back(line_idx);
  } else {
    proc.solution_event = queue.schedule(t + response_h, EventKind::OperatorSolutionDone, line_idx);
    state.operators[responsible].fsm = OperatorFsm::FindingSolution;
    state.operators[responsible].pending_alarms.push_back(line_idx);
  }
}

void operator_cancel(SystemState& state, EventQueue& queue, int line_idx) {
  OperatorProcedure& proc = state.procedures[line_idx];
  if (!proc.active) return;
  queue.cancel(proc.contact_event);
  queue.cancel(proc.solution_event);
  proc = OperatorProcedure{};
  for (auto& op : state.operators) forget_alarm(op, line_idx);
}

void operator_contact_done(SystemState& state, int line_idx) {
  const OperatorProcedure& proc = state.procedures[line_idx];
  if (!proc.active) return;
  state.operators[proc.responsible_area].fsm = OperatorFsm::FindingSolution;
}

bool operator_solution_due(SystemState& state, int line_idx) {
  OperatorProcedure& proc = state.procedures[line_idx];
  if (!proc.active) return false;
  state.operators[proc.responsible_area].fsm = OperatorFsm::Executing;
  proc = OperatorProcedure{};
  for (auto& op : state.operators) forget_alarm(op, line_idx);
  return true;
}

CorrectiveLpSolution execute_corrective_action(SystemState& state, int line_idx,
                                               const SensitivityFactors& sensitivities,
                                               double t) {
  const NetworkModel& model = *state.model;
  OpfInputs inputs;
  inputs.line_in_service = state.line_service_mask();
  inputs.flow_mw = state.flow_mw;
  inputs.gen_available = state.gen_available();
  inputs.gen_output_mw.resize(model.n_generators());
  for (int g = 0; g < model.n_generators(); ++g) inputs.gen_output_mw[g] = state.gens[g].output_mw;
  inputs.load_connected = state.load_connected_mask();
  inputs.load_demand_mw = state.load_demands();

  const OpfScope scope = model.is_tie_line(line_idx) ? OpfScope::TieLine : OpfScope::IntraArea;
  CorrectiveLpProblem problem =
      build_problem(model, inputs, state.islands, line_idx, scope, sensitivities);
  CorrectiveLpSolution solution = solve(problem);
  if (solution.status != CorrectiveLpSolution::Status::Optimal) return solution;

  for (int g : problem.gens) {
    double next = state.gens[g].output_mw + solution.delta_p_mw[g];
    next = std::clamp(next, 0.0, model.generators[g].capacity_mw);
    state.gens[g].output_mw = next;
  }
  for (int i : problem.sheddable_loads) {
    const double dd = solution.delta_d_mw[i];
    if (dd <= 1e-9) continue;
    LoadState& ls = state.loads[i];
    if (ls.fsm == LoadFsm::Connected) ls.transition(LoadFsm::PartiallyShed);
    ls.shed_mw += dd;
  }
  return solution;
}

}  // namespace relsim
