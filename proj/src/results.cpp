#include "relsim/results.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relsim {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string render_header(const RunHeader& h) {
  std::ostringstream os;
  os << "# relsim FORMAT v1\n";
  os << "# seed=" << h.seed << " years=" << h.years << " loading_level="
     << format_number(h.loading_level) << " operator=" << (h.operator_enabled ? "on" : "off");
  if (h.operator_enabled && h.response_override_min >= 0)
    os << " response_min=" << format_number(h.response_override_min);
  os << " size_metric=" << (h.metric == SizeMetric::Energy ? "energy" : "max-demand");
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(h.model_hash));
  os << " model_hash=" << hash << "\n";
  return os.str();
}

namespace {

StatsAccumulator accumulate(const std::vector<ReplicationResult>& results) {
  StatsAccumulator acc;
  for (const auto& r : results) {
    if (r.aborted) {
      ++acc.aborted_years;
      continue;
    }
    acc.add_year(r.records);
  }
  return acc;
}

}  // namespace

std::string render_events_csv(const RunHeader& header,
                              const std::vector<ReplicationResult>& results) {
  std::ostringstream os;
  os << render_header(header);
  os << "year,start_h,end_h,energy_mwh,energy_generation_inadequacy_mwh,"
        "energy_system_splitting_mwh,energy_operator_intervention_mwh,max_unserved_mw,truncated\n";
  for (const auto& r : results) {
    if (r.aborted) continue;
    for (const auto& rec : r.records) {
      os << r.year_index << "," << format_number(rec.start_h) << "," << format_number(rec.end_h)
         << "," << format_number(rec.total_energy_mwh()) << ","
         << format_number(rec.energy_mwh[0]) << "," << format_number(rec.energy_mwh[1]) << ","
         << format_number(rec.energy_mwh[2]) << "," << format_number(rec.max_unserved_mw) << ","
         << (rec.truncated ? 1 : 0) << "\n";
    }
  }
  return os.str();
}

std::string render_freq_csv(const RunHeader& header,
                            const std::vector<ReplicationResult>& results) {
  StatsAccumulator acc = accumulate(results);
  std::ostringstream os;
  os << render_header(header);
  os << "threshold,metric,frequency_per_year,lower90,upper90\n";
  if (acc.years == 0) return os.str();
  const char* metric_name = header.metric == SizeMetric::Energy ? "energy_mwh" : "max_unserved_mw";
  const auto thresholds = default_thresholds(acc.records, header.metric);
  const FrequencyCurve curve =
      frequency_curve(acc.records, acc.years, thresholds, header.metric, 0.90);
  for (size_t k = 0; k < curve.thresholds.size(); ++k) {
    os << format_number(curve.thresholds[k]) << "," << metric_name << ","
       << format_number(curve.frequency[k]) << "," << format_number(curve.lower[k]) << ","
       << format_number(curve.upper[k]) << "\n";
  }
  return os.str();
}

std::string render_overloads_csv(const RunHeader& header, const NetworkModel& model,
                                 const std::vector<ReplicationResult>& results) {
  std::vector<long> alarms(model.n_lines(), 0);
  long total = 0;
  for (const auto& r : results) {
    if (r.aborted) continue;
    for (int l = 0; l < model.n_lines(); ++l) {
      alarms[l] += r.counters.alarms_per_line[l];
      total += r.counters.alarms_per_line[l];
    }
  }
  std::ostringstream os;
  os << render_header(header);
  os << "line_id,overload_episodes,relative_frequency\n";
  for (int l = 0; l < model.n_lines(); ++l) {
    const double rel = total > 0 ? static_cast<double>(alarms[l]) / total : 0.0;
    os << model.lines[l].id << "," << alarms[l] << "," << format_number(rel) << "\n";
  }
  return os.str();
}

std::string render_summary(const RunHeader& header,
                           const std::vector<ReplicationResult>& results) {
  StatsAccumulator acc = accumulate(results);
  long events = 0, truncated = 0;
  long trips = 0, splits = 0, alarm_episodes = 0, opf_runs = 0, opf_infeasible = 0;
  for (const auto& r : results) {
    if (r.aborted) continue;
    events += static_cast<long>(r.records.size());
    for (const auto& rec : r.records)
      if (rec.truncated) ++truncated;
    trips += r.counters.line_trips;
    splits += r.counters.splits;
    alarm_episodes += r.counters.alarm_episodes;
    opf_runs += r.counters.opf_executions;
    opf_infeasible += r.counters.opf_infeasible;
  }

  std::ostringstream os;
  os << render_header(header);
  os << "years_completed " << acc.years << "\n";
  os << "years_aborted " << acc.aborted_years << "\n";
  os << "blackout_events " << events << "\n";
  os << "blackout_events_truncated_at_year_end " << truncated << "\n";
  if (acc.years > 0) {
    const auto eens = eens_by_cause(acc.records, acc.years);
    os << "eens_generation_inadequacy_mwh_per_year " << format_number(eens[0]) << "\n";
    os << "eens_system_splitting_mwh_per_year " << format_number(eens[1]) << "\n";
    os << "eens_operator_intervention_mwh_per_year " << format_number(eens[2]) << "\n";
    os << "eens_total_mwh_per_year " << format_number(eens[0] + eens[1] + eens[2]) << "\n";
  }
  os << "overload_alarm_episodes " << alarm_episodes << "\n";
  os << "line_trips " << trips << "\n";
  os << "system_splits " << splits << "\n";
  os << "corrective_actions_executed " << opf_runs << "\n";
  os << "corrective_actions_infeasible " << opf_infeasible << "\n";
  return os.str();
}

void write_results_bundle(const std::string& out_dir, const RunHeader& header,
                          const NetworkModel& model,
                          const std::vector<ReplicationResult>& results) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out_dir);

  auto write = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
  };
  write("events.csv", render_events_csv(header, results));
  write("freq.csv", render_freq_csv(header, results));
  write("overloads.csv", render_overloads_csv(header, model, results));
  write("summary.txt", render_summary(header, results));
}

}  // namespace relsim
