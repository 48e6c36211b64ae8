#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "relsim/grid_operator.hpp"
#include "relsim/model.hpp"
#include "relsim/powerflow.hpp"
#include "relsim/stats.hpp"

namespace relsim {

/// Hourly demand-factor table, one column per control area. The row count
/// defines the year length (8736 or 8760 hours).
struct DemandProfile {
  int n_areas = 0;
  std::vector<double> values;  // hour-major

  int hours() const { return n_areas == 0 ? 0 : static_cast<int>(values.size()) / n_areas; }
  double gamma(int hour, int area) const { return values[hour * n_areas + area]; }

  static DemandProfile constant(int n_areas, int hours, double value);
};

struct EngineConfig {
  int years = 1;
  std::uint64_t seed = 1;
  OperatorConfig grid_operator;
  FlowMethod flow_method = FlowMethod::IterativeWithFallback;
  int workers = 1;
  bool debug_checks = false;  // verify flow coherence after every event
};

struct ReplicationCounters {
  std::vector<long> alarms_per_line;
  long alarm_episodes = 0;
  long line_trips = 0;
  long permanent_failures = 0;
  long splits = 0;
  long opf_executions = 0;
  long opf_infeasible = 0;
  long events_processed = 0;
  long flow_fallbacks = 0;
};

struct ReplicationResult {
  int year_index = 0;
  bool aborted = false;
  std::string abort_reason;
  std::vector<BlackoutRecord> records;
  std::array<double, kNumCauses> eens_mwh{};
  double total_unserved_mwh = 0.0;  // independent integral for closure checks
  ReplicationCounters counters;
};

/// Simulates one operational year with the stream (seed, year_index).
ReplicationResult run_year(const NetworkModel& model, const DemandProfile& profile,
                           const EngineConfig& config, int year_index);

/// N independent replications with streams (seed, 1..N). Results are
/// identical for any worker count.
std::vector<ReplicationResult> run_monte_carlo(const NetworkModel& model,
                                               const DemandProfile& profile,
                                               const EngineConfig& config);

}  // namespace relsim
