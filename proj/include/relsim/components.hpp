#pragma once

#include <array>
#include <cstdint>
#include <deque>

namespace relsim {

using EventId = std::int32_t;
inline constexpr EventId kNoEvent = -1;

/// Every MWh of unserved energy is attributed to exactly one cause.
enum class OutageCause : int {
  GenerationInadequacy = 0,
  SystemSplitting = 1,
  OperatorIntervention = 2,
};
inline constexpr int kNumCauses = 3;
const char* to_string(OutageCause cause);

enum class LoadFsm : int { Connected, PartiallyShed, Disconnected, WaitingForRestoration };
enum class GenFsm : int { Up, ForcedDown };
enum class LineFsm : int {
  InService,
  OutOverload,
  OutPermanentFailure,
  WaitingReconnection,
  UnderRepair,
};
enum class ProtectionFsm : int { Idle, AlarmSent };

bool load_transition_allowed(LoadFsm from, LoadFsm to);
bool generator_transition_allowed(GenFsm from, GenFsm to);
bool line_transition_allowed(LineFsm from, LineFsm to);

inline bool line_in_service(LineFsm s) { return s == LineFsm::InService; }

struct LoadState {
  LoadFsm fsm = LoadFsm::Connected;
  double shed_mw = 0.0;                 // partial shed, > 0 iff PartiallyShed
  double disconnect_time_h = 0.0;
  OutageCause disconnect_cause = OutageCause::GenerationInadequacy;

  void transition(LoadFsm next);  // throws on an edge outside the state machine
};

struct GeneratorState {
  GenFsm fsm = GenFsm::Up;
  double output_mw = 0.0;  // always 0 while ForcedDown
  EventId pending_transition = kNoEvent;

  void transition(GenFsm next);
};

struct LineState {
  LineFsm fsm = LineFsm::InService;
  ProtectionFsm protection = ProtectionFsm::Idle;
  double outage_threshold_mw = 0.0;  // valid only while an alarm episode is active
  double trip_time_h = 0.0;
  EventId pending_fail_or_repair = kNoEvent;
  EventId pending_reclose = kNoEvent;

  void transition(LineFsm next);
};

/// Demand of one load at time t:
///   gamma(t) * peak * (1 + rho(t)) - shed, floored at zero.
double load_demand(double peak_mw, double gamma, double rho, double shed_mw);

/// Staged system restoration ramp: rate as a function of the time elapsed
/// since the overall restoration process started.
double restoration_rate_mw_per_min(double elapsed_min);

/// Integral of the ramp: total MW restorable elapsed_min after process start.
double restored_mw_at(double elapsed_min);

/// Inverse of restored_mw_at: minutes after process start at which the
/// cumulative restored power reaches target_mw.
double restoration_minutes_for(double target_mw);

/// Angle difference below which a tripped line may be reconnected
/// immediately: eta * x * p_max (in the solver's angle scale where
/// flow = dtheta / x).
inline double reconnect_angle_limit(double eta, double reactance_pu, double p_max_mw) {
  return eta * reactance_pu * p_max_mw;
}

/// FIFO restoration queue. Loads are restored in disconnection order; the
/// head load must be fully reconnected before the next one starts.
struct RestorationQueue {
  std::deque<int> waiting;        // load indices in disconnection order
  bool active = false;            // an overall restoration process is running
  double process_start_h = 0.0;   // origin of the elapsed-time ramp
  double restored_so_far_mw = 0.0;
  bool head_started = false;
  double head_amount_mw = 0.0;    // demand frozen when the head's restoration began
  EventId head_event = kNoEvent;
};

}  // namespace relsim
