#include "relsim/components.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace relsim {

const char* to_string(OutageCause cause) {
  switch (cause) {
    case OutageCause::GenerationInadequacy: return "generation_inadequacy";
    case OutageCause::SystemSplitting: return "system_splitting";
    case OutageCause::OperatorIntervention: return "operator_intervention";
  }
  return "?";
}

bool load_transition_allowed(LoadFsm from, LoadFsm to) {
  using L = LoadFsm;
  switch (from) {
    case L::Connected: return to == L::PartiallyShed || to == L::Disconnected;
    case L::PartiallyShed: return to == L::Connected || to == L::Disconnected;
    case L::Disconnected: return to == L::WaitingForRestoration;
    case L::WaitingForRestoration: return to == L::Connected || to == L::Disconnected;
  }
  return false;
}

bool generator_transition_allowed(GenFsm from, GenFsm to) {
  return (from == GenFsm::Up && to == GenFsm::ForcedDown) ||
         (from == GenFsm::ForcedDown && to == GenFsm::Up);
}

bool line_transition_allowed(LineFsm from, LineFsm to) {
  using S = LineFsm;
  switch (from) {
    case S::InService: return to == S::OutOverload || to == S::OutPermanentFailure;
    case S::OutOverload: return to == S::WaitingReconnection || to == S::InService;
    case S::WaitingReconnection: return to == S::InService;
    case S::OutPermanentFailure: return to == S::UnderRepair;
    case S::UnderRepair: return to == S::InService;
  }
  return false;
}

namespace {

[[noreturn]] void bad_edge(const char* machine, int from, int to) {
  throw std::logic_error(std::string("illegal ") + machine + " transition " +
                         std::to_string(from) + " -> " + std::to_string(to));
}

}  // namespace

void LoadState::transition(LoadFsm next) {
  if (!load_transition_allowed(fsm, next)) bad_edge("load", static_cast<int>(fsm), static_cast<int>(next));
  fsm = next;
}

void GeneratorState::transition(GenFsm next) {
  if (!generator_transition_allowed(fsm, next))
    bad_edge("generator", static_cast<int>(fsm), static_cast<int>(next));
  fsm = next;
}

void LineState::transition(LineFsm next) {
  if (!line_transition_allowed(fsm, next)) bad_edge("line", static_cast<int>(fsm), static_cast<int>(next));
  fsm = next;
}

double load_demand(double peak_mw, double gamma, double rho, double shed_mw) {
  return std::max(0.0, gamma * peak_mw * (1.0 + rho) - shed_mw);
}

namespace {

// Stage boundaries (minutes) and rates (MW/min) of the restoration ramp.
constexpr double kStageEnd[3] = {30.0, 60.0, 90.0};
constexpr double kStageRate[4] = {10.0, 33.3, 66.6, 83.3};

}  // namespace

double restoration_rate_mw_per_min(double elapsed_min) {
  if (elapsed_min < 0) throw std::invalid_argument("elapsed time must be >= 0");
  for (int s = 0; s < 3; ++s)
    if (elapsed_min < kStageEnd[s]) return kStageRate[s];
  return kStageRate[3];
}

double restored_mw_at(double elapsed_min) {
  if (elapsed_min < 0) throw std::invalid_argument("elapsed time must be >= 0");
  double total = 0.0;
  double prev = 0.0;
  for (int s = 0; s < 3; ++s) {
    if (elapsed_min <= kStageEnd[s]) return total + kStageRate[s] * (elapsed_min - prev);
    total += kStageRate[s] * (kStageEnd[s] - prev);
    prev = kStageEnd[s];
  }
  return total + kStageRate[3] * (elapsed_min - prev);
}

double restoration_minutes_for(double target_mw) {
  if (target_mw <= 0) return 0.0;
  double total = 0.0;
  double prev = 0.0;
  for (int s = 0; s < 3; ++s) {
    const double stage_mw = kStageRate[s] * (kStageEnd[s] - prev);
    if (target_mw <= total + stage_mw) return prev + (target_mw - total) / kStageRate[s];
    total += stage_mw;
    prev = kStageEnd[s];
  }
  return prev + (target_mw - total) / kStageRate[3];
}

}  // namespace relsim
