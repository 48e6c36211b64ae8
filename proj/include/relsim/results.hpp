#pragma once

#include <string>
#include <vector>

#include "relsim/engine.hpp"
#include "relsim/stats.hpp"

namespace relsim {

/// Run metadata recorded at the top of every output file. Everything is
/// deterministic so identical runs produce byte-identical outputs.
struct RunHeader {
  std::uint64_t seed = 0;
  int years = 0;
  double loading_level = 1.0;
  bool operator_enabled = true;
  double response_override_min = -1.0;
  SizeMetric metric = SizeMetric::Energy;
  std::uint64_t model_hash = 0;
};

/// Fixed 6-significant-digit float formatting used in all outputs.
std::string format_number(double v);

std::string render_header(const RunHeader& header);
std::string render_events_csv(const RunHeader& header,
                              const std::vector<ReplicationResult>& results);
std::string render_freq_csv(const RunHeader& header, const std::vector<ReplicationResult>& results);
std::string render_overloads_csv(const RunHeader& header, const NetworkModel& model,
                                 const std::vector<ReplicationResult>& results);
std::string render_summary(const RunHeader& header, const std::vector<ReplicationResult>& results);

/// Writes events.csv, freq.csv, overloads.csv and summary.txt into out_dir.
void write_results_bundle(const std::string& out_dir, const RunHeader& header,
                          const NetworkModel& model,
                          const std::vector<ReplicationResult>& results);

}  // namespace relsim
