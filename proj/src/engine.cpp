#include "relsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "relsim/dispatch.hpp"
#include "relsim/events.hpp"
#include "relsim/rng.hpp"
#include "relsim/splitting.hpp"

namespace relsim {

DemandProfile DemandProfile::constant(int n_areas, int hours, double value) {
  DemandProfile p;
  p.n_areas = n_areas;
  p.values.assign(static_cast<size_t>(n_areas) * hours, value);
  return p;
}

namespace {

constexpr double kMwTol = 1e-9;

class Simulation {
 public:
  Simulation(const NetworkModel& model, const DemandProfile& profile, const EngineConfig& config,
             int year_index)
      : model_(model),
        profile_(profile),
        config_(config),
        rng_(config.seed, static_cast<std::uint64_t>(year_index)),
        horizon_h_(profile.hours()) {
    result_.year_index = year_index;
    result_.counters.alarms_per_line.assign(model.n_lines(), 0);
  }

  ReplicationResult run() {
    try {
      initialize();
      SimEvent ev;
      while (queue_.next_time() < horizon_h_) {
        queue_.pop(ev);
        process(ev);
      }
      finish_year();
    } catch (const std::exception& e) {
      result_.aborted = true;
      result_.abort_reason = e.what();
    }
    return result_;
  }

 private:
  // --- setup -------------------------------------------------------------

  void initialize() {
    state_.init(model_);
    update_gamma_rho(0);

    for (int g = 0; g < model_.n_generators(); ++g) {
      const auto& gen = model_.generators[g];
      const double lambda = per_year_to_per_hour(gen.failure_rate_y);
      const double p_up = steady_state_up_probability(lambda, gen.repair_rate_h);
      if (rng_.uniform01() < p_up) {
        schedule_gen_transition(g);  // Up is the default state
      } else {
        state_.gens[g].fsm = GenFsm::ForcedDown;
        state_.gens[g].output_mw = 0.0;
        schedule_gen_transition(g);
      }
    }
    for (int l = 0; l < model_.n_lines(); ++l) {
      const auto& line = model_.lines[l];
      const double lambda = per_year_to_per_hour(line.failure_rate_y);
      const double p_up = steady_state_up_probability(lambda, line.repair_rate_h);
      if (rng_.uniform01() < p_up) {
        schedule_line_failure(l);  // InService is the default state
      } else {
        state_.lines[l].fsm = LineFsm::UnderRepair;
        state_.lines[l].pending_fail_or_repair =
            schedule_within_horizon(rng_.exponential(line.repair_rate_h), EventKind::LineRepair, l);
      }
    }

    // Baseline islands before the first settle so a degraded initial
    // topology does not register as a splitting event.
    state_.islands = connected_components(model_, state_.line_service_mask());
    settle(true);
    refresh_unserved();
    if (horizon_h_ > 1) queue_.schedule(1.0, EventKind::HourTick, 1);
  }

  // --- event dispatch ----------------------------------------------------

  void process(const SimEvent& ev) {
    ++result_.counters.events_processed;
    accrue(ev.time_h);
    state_.clock_h = ev.time_h;
    switch (ev.kind) {
      case EventKind::HourTick: on_hour_tick(ev.subject); break;
      case EventKind::GenDown: on_gen_down(ev.subject); break;
      case EventKind::GenUp: on_gen_up(ev.subject); break;
      case EventKind::LinePermFail: on_line_perm_fail(ev.subject); break;
      case EventKind::LineRepair: on_line_repair(ev.subject); break;
      case EventKind::ManualReclose: on_manual_reclose(ev.subject); break;
      case EventKind::OperatorContactDone: operator_contact_done(state_, ev.subject); break;
      case EventKind::OperatorSolutionDone: on_operator_solution(ev.subject); break;
      case EventKind::RestorationComplete: on_restoration_complete(ev.subject); break;
      case EventKind::LineTrip: break;  // trips are applied inside the cascade loop
    }
    refresh_unserved();
    if (config_.debug_checks) check_coherence();
  }

  void on_hour_tick(int hour) {
    state_.hour = hour;
    update_gamma_rho(hour);
    settle(true);
    if (hour + 1 < horizon_h_)
      queue_.schedule(static_cast<double>(hour + 1), EventKind::HourTick, hour + 1);
  }

  void on_gen_down(int g) {
    auto& gs = state_.gens[g];
    gs.pending_transition = kNoEvent;
    gs.transition(GenFsm::ForcedDown);
    gs.output_mw = 0.0;
    schedule_gen_transition(g);
    settle(true);
  }

  void on_gen_up(int g) {
    auto& gs = state_.gens[g];
    gs.pending_transition = kNoEvent;
    gs.transition(GenFsm::Up);
    schedule_gen_transition(g);
    settle(true);
  }

  void on_line_perm_fail(int l) {
    auto& ls = state_.lines[l];
    ls.pending_fail_or_repair = kNoEvent;
    ls.transition(LineFsm::OutPermanentFailure);
    ++result_.counters.permanent_failures;
    ls.protection = ProtectionFsm::Idle;
    ls.outage_threshold_mw = 0.0;
    operator_cancel(state_, queue_, l);
    // Repair starts immediately.
    ls.transition(LineFsm::UnderRepair);
    ls.pending_fail_or_repair = schedule_within_horizon(
        rng_.exponential(model_.lines[l].repair_rate_h), EventKind::LineRepair, l);
    settle(true);
  }

  void on_line_repair(int l) {
    auto& ls = state_.lines[l];
    ls.pending_fail_or_repair = kNoEvent;
    ls.transition(LineFsm::InService);
    schedule_line_failure(l);
    settle(true);
  }

  void on_manual_reclose(int l) {
    auto& ls = state_.lines[l];
    ls.pending_reclose = kNoEvent;
    if (ls.fsm != LineFsm::WaitingReconnection && ls.fsm != LineFsm::OutOverload) return;
    ls.transition(LineFsm::InService);
    schedule_line_failure(l);
    settle(true);
  }

  void on_operator_solution(int l) {
    if (!operator_solution_due(state_, l)) return;
    if (state_.lines[l].protection != ProtectionFsm::AlarmSent) return;  // self-resolved
    ++result_.counters.opf_executions;
    ensure_sensitivities();
    CorrectiveLpSolution sol = execute_corrective_action(state_, l, sens_factors_, state_.clock_h);
    if (sol.status != CorrectiveLpSolution::Status::Optimal) {
      // Leave the overload to the protection outcome.
      ++result_.counters.opf_infeasible;
      return;
    }
    settle(false);  // keep the corrective redispatch in place
  }

  void on_restoration_complete(int i) {
    auto& rq = state_.restoration;
    if (!rq.head_started || rq.waiting.empty() || rq.waiting.front() != i) return;
    rq.head_event = kNoEvent;
    rq.head_started = false;
    rq.restored_so_far_mw += rq.head_amount_mw;
    rq.waiting.pop_front();
    auto& ld = state_.loads[i];
    ld.transition(LoadFsm::Connected);
    ld.shed_mw = 0.0;
    settle(true);
  }

  // --- cascade core --------------------------------------------------------

  // Re-establishes a consistent state after any change: recomputes islands
  // (handling fresh splits), rebalances and redispatches where needed,
  // re-solves the flows, and lets protection devices act until nothing
  // changes any more. refresh_dispatch=false preserves the current
  // generator outputs (used right after a corrective action).
  void settle(bool refresh_dispatch) {
    for (int guard = 0;; ++guard) {
      if (guard > 20000) throw std::runtime_error("cascade did not reach a fixed point");

      const std::vector<bool> mask = state_.line_service_mask();
      Islands now = connected_components(model_, mask);
      if (now.island_of != state_.islands.island_of) {
        if (now.count() > state_.islands.count()) {
          ++result_.counters.splits;
          handle_split(state_, state_.islands, now, state_.clock_h, rng_);
        }
        state_.islands = std::move(now);
        refresh_dispatch = true;
      }

      if (refresh_dispatch) {
        rebalance_islands();
        apply_dispatch();
        refresh_dispatch = false;
      }

      solve_flows(mask);

      if (protection_scan()) {
        refresh_dispatch = true;
        continue;
      }
      if (reconnection_scan()) {
        refresh_dispatch = true;
        continue;
      }
      if (!any_alarm_active() && cancel_all_sheds()) {
        refresh_dispatch = true;
        continue;
      }
      break;
    }
    update_restoration();
  }

  void rebalance_islands() {
    for (const auto& group : state_.islands.groups) {
      auto [capacity, demand] = island_balance(model_, state_, group);
      if (demand > capacity + kMwTol)
        shed_until_feasible(state_, group, OutageCause::GenerationInadequacy, state_.clock_h, rng_);
    }
  }

  void apply_dispatch() {
    DispatchResult result = dispatch(model_, state_.islands, state_.load_demands(),
                                     state_.load_connected_mask(), state_.gen_available());
    if (result.unserved_mw > 1e-6)
      throw std::logic_error("dispatch infeasible after rebalance");
    for (int g = 0; g < model_.n_generators(); ++g)
      state_.gens[g].output_mw = result.output_mw[g];
  }

  void solve_flows(const std::vector<bool>& mask) {
    std::vector<double> injection(model_.n_buses(), 0.0);
    for (int g = 0; g < model_.n_generators(); ++g)
      injection[model_.gen_bus(g)] += state_.gens[g].output_mw;
    for (int i = 0; i < model_.n_loads(); ++i)
      injection[model_.load_bus(i)] -= state_.load_current_demand(i);

    FlowSolution sol = solve_dc_flow(model_, mask, injection, state_.islands,
                                     config_.flow_method, &state_.theta);
    if (sol.used_fallback) ++result_.counters.flow_fallbacks;
    state_.theta = std::move(sol.theta);
    state_.flow_mw = std::move(sol.flow_mw);
  }

  bool protection_scan() {
    const Params& params = model_.params;
    std::vector<int> to_trip;
    for (int l = 0; l < model_.n_lines(); ++l) {
      auto& ls = state_.lines[l];
      if (ls.fsm != LineFsm::InService) continue;
      const double flow = std::abs(state_.flow_mw[l]);
      const double rating = model_.lines[l].rating_mw;
      if (ls.protection == ProtectionFsm::AlarmSent) {
        if (flow < rating) {
          ls.protection = ProtectionFsm::Idle;
          ls.outage_threshold_mw = 0.0;
          operator_cancel(state_, queue_, l);
        } else if (flow >= ls.outage_threshold_mw) {
          to_trip.push_back(l);
        }
      } else if (flow >= rating) {
        ls.protection = ProtectionFsm::AlarmSent;
        ls.outage_threshold_mw = sample_outage_threshold(rating, params.beta, rng_);
        ++result_.counters.alarm_episodes;
        ++result_.counters.alarms_per_line[l];
        operator_on_alarm(state_, queue_, config_.grid_operator, l, state_.clock_h);
        if (flow >= ls.outage_threshold_mw) to_trip.push_back(l);
      }
    }
    // All devices measured the same pre-trip flows, so simultaneous
    // crossings open together.
    for (int l : to_trip) trip_line(l);
    return !to_trip.empty();
  }

  void trip_line(int l) {
    auto& ls = state_.lines[l];
    queue_.cancel(ls.pending_fail_or_repair);  // failure clock pauses while out
    ls.pending_fail_or_repair = kNoEvent;
    ls.transition(LineFsm::OutOverload);
    ls.protection = ProtectionFsm::Idle;
    ls.outage_threshold_mw = 0.0;
    ls.trip_time_h = state_.clock_h;
    operator_cancel(state_, queue_, l);
    ls.pending_reclose = schedule_within_horizon(model_.lines[l].reclose_delay_h,
                                                 EventKind::ManualReclose, l);
    ++result_.counters.line_trips;
  }

  bool reconnection_scan() {
    bool reconnected = false;
    for (int l = 0; l < model_.n_lines(); ++l) {
      auto& ls = state_.lines[l];
      if (ls.fsm != LineFsm::OutOverload && ls.fsm != LineFsm::WaitingReconnection) continue;
      const int a = model_.line_from(l);
      const int b = model_.line_to(l);
      // Endpoints in different islands have unrelated angle references;
      // only the manual reclose can resynchronize them.
      if (state_.islands.island_of[a] == state_.islands.island_of[b]) {
        const double limit = reconnect_angle_limit(model_.params.eta,
                                                   model_.lines[l].reactance_pu,
                                                   model_.lines[l].rating_mw);
        if (std::abs(state_.theta[a] - state_.theta[b]) < limit) {
          queue_.cancel(ls.pending_reclose);
          ls.pending_reclose = kNoEvent;
          ls.transition(LineFsm::InService);
          schedule_line_failure(l);
          reconnected = true;
          continue;
        }
      }
      if (ls.fsm == LineFsm::OutOverload) ls.transition(LineFsm::WaitingReconnection);
    }
    return reconnected;
  }

  bool any_alarm_active() const {
    for (const auto& ls : state_.lines)
      if (ls.protection == ProtectionFsm::AlarmSent) return true;
    return false;
  }

  // Partial shedding is cancelled once the system runs without any
  // overload alarm again.
  bool cancel_all_sheds() {
    bool any = false;
    for (auto& ld : state_.loads) {
      if (ld.fsm != LoadFsm::PartiallyShed) continue;
      ld.transition(LoadFsm::Connected);
      ld.shed_mw = 0.0;
      any = true;
    }
    return any;
  }

  // --- restoration -----------------------------------------------------

  void update_restoration() {
    auto& rq = state_.restoration;
    if (rq.waiting.empty()) {
      rq.active = false;
      return;
    }
    const int head = rq.waiting.front();
    const auto& group = state_.islands.groups[state_.islands.island_of[model_.load_bus(head)]];
    auto [capacity, demand] = island_balance(model_, state_, group);
    const double spare = capacity - demand;

    if (rq.head_started) {
      if (spare + kMwTol < rq.head_amount_mw) {
        // Capacity was lost again: pause; a later restart begins a new
        // restoration process at the lowest ramp stage.
        queue_.cancel(rq.head_event);
        rq.head_event = kNoEvent;
        rq.head_started = false;
        state_.loads[head].transition(LoadFsm::Disconnected);
        rq.active = false;
      }
      return;
    }

    const double need = state_.load_hypothetical_demand(head);
    if (spare + kMwTol < need) {
      rq.active = false;
      return;
    }
    if (!rq.active) {
      rq.active = true;
      rq.process_start_h = state_.clock_h;
      rq.restored_so_far_mw = 0.0;
    }
    rq.head_amount_mw = need;
    const double done_min = restoration_minutes_for(rq.restored_so_far_mw + need);
    const double done_h = std::max(state_.clock_h, rq.process_start_h + done_min / 60.0);
    rq.head_event = schedule_at(done_h, EventKind::RestorationComplete, head);
    if (rq.head_event != kNoEvent) {
      rq.head_started = true;
      state_.loads[head].transition(LoadFsm::WaitingForRestoration);
    }
  }

  // --- accounting --------------------------------------------------------

  void accrue(double t) {
    auto& acct = state_.acct;
    const double dt = t - acct.last_time_h;
    if (dt > 0) {
      const auto& p = acct.unserved_power_mw;
      const double total = p[0] + p[1] + p[2];
      if (total > kMwTol) {
        for (int c = 0; c < kNumCauses; ++c) acct.open_record.energy_mwh[c] += p[c] * dt;
        acct.total_energy_mwh += total * dt;
      }
    }
    acct.last_time_h = t;
  }

  void refresh_unserved() {
    auto& acct = state_.acct;
    std::array<double, kNumCauses> power{};
    for (int i = 0; i < model_.n_loads(); ++i) {
      const auto& ld = state_.loads[i];
      if (ld.fsm == LoadFsm::Disconnected || ld.fsm == LoadFsm::WaitingForRestoration) {
        power[static_cast<int>(ld.disconnect_cause)] += state_.load_hypothetical_demand(i);
      } else if (ld.fsm == LoadFsm::PartiallyShed) {
        // The unserved part can never exceed what the load would draw.
        power[static_cast<int>(OutageCause::OperatorIntervention)] +=
            std::min(ld.shed_mw, state_.load_hypothetical_demand(i));
      }
    }
    const double total = power[0] + power[1] + power[2];
    acct.unserved_power_mw = power;
    if (total > kMwTol && !acct.record_open) {
      acct.record_open = true;
      acct.open_record = BlackoutRecord{};
      acct.open_record.start_h = state_.clock_h;
    }
    if (acct.record_open) {
      acct.open_record.max_unserved_mw = std::max(acct.open_record.max_unserved_mw, total);
      if (total <= kMwTol) {
        acct.open_record.end_h = state_.clock_h;
        result_.records.push_back(acct.open_record);
        acct.record_open = false;
      }
    }
  }

  void finish_year() {
    accrue(horizon_h_);
    state_.clock_h = horizon_h_;
    auto& acct = state_.acct;
    if (acct.record_open) {
      acct.open_record.end_h = horizon_h_;
      acct.open_record.truncated = true;
      result_.records.push_back(acct.open_record);
      acct.record_open = false;
    }
    for (const auto& r : result_.records)
      for (int c = 0; c < kNumCauses; ++c) result_.eens_mwh[c] += r.energy_mwh[c];
    result_.total_unserved_mwh = acct.total_energy_mwh;
  }

  // --- helpers -----------------------------------------------------------

  void update_gamma_rho(int hour) {
    for (int a = 0; a < model_.n_areas(); ++a) {
      state_.gamma[a] = profile_.gamma(hour, a);
      state_.rho[a] = sample_demand_deviation(model_.params.demand_sigma, rng_);
    }
  }

  EventId schedule_within_horizon(double delay_h, EventKind kind, int subject) {
    return schedule_at(state_.clock_h + delay_h, kind, subject);
  }

  EventId schedule_at(double t, EventKind kind, int subject) {
    if (!(t < horizon_h_)) return kNoEvent;  // nothing beyond the year is processed
    return queue_.schedule(t, kind, subject);
  }

  void schedule_gen_transition(int g) {
    auto& gs = state_.gens[g];
    const auto& gen = model_.generators[g];
    const double rate = gs.fsm == GenFsm::Up ? per_year_to_per_hour(gen.failure_rate_y)
                                             : gen.repair_rate_h;
    const double dt = rng_.exponential(rate);
    const EventKind kind = gs.fsm == GenFsm::Up ? EventKind::GenDown : EventKind::GenUp;
    gs.pending_transition = std::isfinite(dt) ? schedule_within_horizon(dt, kind, g) : kNoEvent;
  }

  void schedule_line_failure(int l) {
    auto& ls = state_.lines[l];
    const double rate = per_year_to_per_hour(model_.lines[l].failure_rate_y);
    const double dt = rng_.exponential(rate);
    ls.pending_fail_or_repair =
        std::isfinite(dt) ? schedule_within_horizon(dt, EventKind::LinePermFail, l) : kNoEvent;
  }

  void ensure_sensitivities() {
    const std::vector<bool> mask = state_.line_service_mask();
    const std::uint64_t fp = topology_fingerprint(mask);
    if (sens_valid_ && sens_factors_.topology_fingerprint == fp) return;
    std::vector<int> scope;
    for (int l = 0; l < model_.n_lines(); ++l)
      if (mask[l]) scope.push_back(l);
    sens_factors_ = sensitivity_factors(model_, mask, scope, state_.islands);
    sens_valid_ = true;
  }

  void check_coherence() {
    const std::vector<bool> mask = state_.line_service_mask();
    std::vector<double> injection(model_.n_buses(), 0.0);
    for (int g = 0; g < model_.n_generators(); ++g)
      injection[model_.gen_bus(g)] += state_.gens[g].output_mw;
    for (int i = 0; i < model_.n_loads(); ++i)
      injection[model_.load_bus(i)] -= state_.load_current_demand(i);
    FlowSolution sol;
    sol.theta = state_.theta;
    sol.flow_mw = state_.flow_mw;
    for (const auto& group : state_.islands.groups) sol.reference_bus.push_back(group.front());
    const FlowCheck check = verify_flow(sol, model_, mask, injection, state_.islands);
    if (check.max_nodal_residual_mw > 1e-6 || check.max_method_gap_mw > 1e-6)
      throw std::logic_error("state-flow coherence violated after event");
  }

  const NetworkModel& model_;
  const DemandProfile& profile_;
  const EngineConfig& config_;
  RngStream rng_;
  const double horizon_h_;

  SystemState state_;
  EventQueue queue_;
  ReplicationResult result_;
  SensitivityFactors sens_factors_;
  bool sens_valid_ = false;
};

}  // namespace

ReplicationResult run_year(const NetworkModel& model, const DemandProfile& profile,
                           const EngineConfig& config, int year_index) {
  if (profile.hours() < 1) throw std::invalid_argument("profile must cover at least one hour");
  if (profile.n_areas != model.n_areas())
    throw std::invalid_argument("profile column count does not match the model's areas");
  Simulation sim(model, profile, config, year_index);
  return sim.run();
}

std::vector<ReplicationResult> run_monte_carlo(const NetworkModel& model,
                                               const DemandProfile& profile,
                                               const EngineConfig& config) {
  if (config.years < 1) throw std::invalid_argument("need at least one replication year");
  std::vector<ReplicationResult> results(config.years);
  const int workers = std::clamp(config.workers, 1, config.years);
  if (workers == 1) {
    for (int i = 0; i < config.years; ++i) results[i] = run_year(model, profile, config, i + 1);
    return results;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < config.years; i = next.fetch_add(1))
      results[i] = run_year(model, profile, config, i + 1);
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace relsim
