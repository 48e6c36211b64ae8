#include "relsim/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace relsim {

namespace {

template <typename T>
std::unordered_map<Id, int> index_by_id(const std::vector<T>& items) {
  std::unordered_map<Id, int> map;
  map.reserve(items.size());
  for (int i = 0; i < static_cast<int>(items.size()); ++i) map.emplace(items[i].id, i);
  return map;
}

}  // namespace

void NetworkModel::finalize() {
  auto bus_map = index_by_id(buses);
  auto area_map = index_by_id(areas);

  bus_area_.assign(buses.size(), -1);
  for (size_t i = 0; i < buses.size(); ++i) {
    auto it = area_map.find(buses[i].area_id);
    bus_area_[i] = it == area_map.end() ? -1 : it->second;
  }

  line_from_.assign(lines.size(), -1);
  line_to_.assign(lines.size(), -1);
  bus_lines_.assign(buses.size(), {});
  for (size_t l = 0; l < lines.size(); ++l) {
    auto f = bus_map.find(lines[l].from_bus);
    auto t = bus_map.find(lines[l].to_bus);
    line_from_[l] = f == bus_map.end() ? -1 : f->second;
    line_to_[l] = t == bus_map.end() ? -1 : t->second;
    if (line_from_[l] >= 0) bus_lines_[line_from_[l]].push_back(static_cast<int>(l));
    if (line_to_[l] >= 0 && line_to_[l] != line_from_[l])
      bus_lines_[line_to_[l]].push_back(static_cast<int>(l));
  }

  gen_bus_.assign(generators.size(), -1);
  bus_gens_.assign(buses.size(), {});
  for (size_t g = 0; g < generators.size(); ++g) {
    auto it = bus_map.find(generators[g].bus);
    gen_bus_[g] = it == bus_map.end() ? -1 : it->second;
    if (gen_bus_[g] >= 0) bus_gens_[gen_bus_[g]].push_back(static_cast<int>(g));
  }

  load_bus_.assign(loads.size(), -1);
  bus_loads_.assign(buses.size(), {});
  for (size_t i = 0; i < loads.size(); ++i) {
    auto it = bus_map.find(loads[i].bus);
    load_bus_[i] = it == bus_map.end() ? -1 : it->second;
    if (load_bus_[i] >= 0) bus_loads_[load_bus_[i]].push_back(static_cast<int>(i));
  }
}

int NetworkModel::bus_index(Id id) const {
  for (int i = 0; i < n_buses(); ++i)
    if (buses[i].id == id) return i;
  return -1;
}

int NetworkModel::line_index(Id id) const {
  for (int i = 0; i < n_lines(); ++i)
    if (lines[i].id == id) return i;
  return -1;
}

int NetworkModel::area_index(Id id) const {
  for (int i = 0; i < n_areas(); ++i)
    if (areas[i].id == id) return i;
  return -1;
}

std::uint64_t NetworkModel::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  auto mix_d = [&](double v) { mix(&v, sizeof v); };
  auto mix_u = [&](std::uint64_t v) { mix(&v, sizeof v); };

  mix_d(base_mva);
  mix_d(params.beta);
  mix_d(params.eta);
  mix_d(params.xi);
  mix_d(params.shed_weight);
  mix_d(params.demand_sigma);
  for (const auto& b : buses) {
    mix_u(b.id);
    mix_u(b.area_id);
  }
  for (const auto& l : lines) {
    mix_u(l.id);
    mix_u(l.from_bus);
    mix_u(l.to_bus);
    mix_d(l.reactance_pu);
    mix_d(l.rating_mw);
    mix_d(l.failure_rate_y);
    mix_d(l.repair_rate_h);
    mix_d(l.reclose_delay_h);
    mix_u(l.responsible_area);
  }
  for (const auto& g : generators) {
    mix_u(g.id);
    mix_u(g.bus);
    mix_d(g.capacity_mw);
    mix_u(static_cast<std::uint64_t>(g.priority));
    mix_d(g.failure_rate_y);
    mix_d(g.repair_rate_h);
  }
  for (const auto& d : loads) {
    mix_u(d.id);
    mix_u(d.bus);
    mix_d(d.peak_mw);
  }
  for (const auto& a : areas) {
    mix_u(a.id);
    mix_d(a.contact_delay_min);
    mix_d(a.response_delay_min);
  }
  return h;
}

ValidationReport validate(const NetworkModel& model) {
  ValidationReport report;
  auto issue = [&report](const std::string& s) { report.issues.push_back(s); };

  std::set<Id> seen;
  for (const auto& b : model.buses)
    if (!seen.insert(b.id).second) issue("duplicate bus id " + std::to_string(b.id));
  seen.clear();
  for (const auto& l : model.lines)
    if (!seen.insert(l.id).second) issue("duplicate line id " + std::to_string(l.id));
  seen.clear();
  for (const auto& g : model.generators)
    if (!seen.insert(g.id).second) issue("duplicate generator id " + std::to_string(g.id));
  seen.clear();
  for (const auto& d : model.loads)
    if (!seen.insert(d.id).second) issue("duplicate load id " + std::to_string(d.id));
  seen.clear();
  for (const auto& a : model.areas)
    if (!seen.insert(a.id).second) issue("duplicate area id " + std::to_string(a.id));

  for (int i = 0; i < model.n_buses(); ++i) {
    if (model.bus_area(i) < 0)
      issue("bus " + std::to_string(model.buses[i].id) + " references unknown area " +
            std::to_string(model.buses[i].area_id));
  }
  for (int l = 0; l < model.n_lines(); ++l) {
    const Line& ln = model.lines[l];
    const std::string tag = "line " + std::to_string(ln.id);
    if (model.line_from(l) < 0)
      issue(tag + " references unknown bus " + std::to_string(ln.from_bus));
    if (model.line_to(l) < 0)
      issue(tag + " references unknown bus " + std::to_string(ln.to_bus));
    if (ln.from_bus == ln.to_bus) issue(tag + " is a self-loop");
    if (!(ln.reactance_pu > 0)) issue(tag + " has non-positive reactance");
    if (!(ln.rating_mw > 0)) issue(tag + " has non-positive rating");
    if (ln.failure_rate_y < 0) issue(tag + " has negative failure rate");
    if (!(ln.repair_rate_h > 0)) issue(tag + " has non-positive repair rate");
    if (ln.reclose_delay_h < 0) issue(tag + " has negative reclose delay");
    if (ln.responsible_area != 0 && model.area_index(ln.responsible_area) < 0)
      issue(tag + " names unknown responsible area " + std::to_string(ln.responsible_area));
  }
  for (int g = 0; g < model.n_generators(); ++g) {
    const Generator& gen = model.generators[g];
    const std::string tag = "generator " + std::to_string(gen.id);
    if (model.gen_bus(g) < 0) issue(tag + " references unknown bus " + std::to_string(gen.bus));
    if (!(gen.capacity_mw > 0)) issue(tag + " has non-positive capacity");
    if (gen.priority < 1) issue(tag + " has priority < 1");
    if (gen.failure_rate_y < 0) issue(tag + " has negative failure rate");
    if (!(gen.repair_rate_h > 0)) issue(tag + " has non-positive repair rate");
  }
  for (int i = 0; i < model.n_loads(); ++i) {
    const Load& ld = model.loads[i];
    const std::string tag = "load " + std::to_string(ld.id);
    if (model.load_bus(i) < 0) issue(tag + " references unknown bus " + std::to_string(ld.bus));
    if (!(ld.peak_mw > 0)) issue(tag + " has non-positive peak demand");
  }
  if (model.n_areas() == 0) issue("no control areas defined");
  for (const auto& a : model.areas) {
    if (a.contact_delay_min < 0 || a.response_delay_min < 0)
      issue("area " + std::to_string(a.id) + " has a negative operator delay");
  }
  if (!(model.params.beta > 1))
    issue("parameter beta must be > 1");
  if (model.params.eta < 0) issue("parameter eta must be >= 0");
  if (!(model.params.xi > 0 && model.params.xi <= 1)) issue("parameter xi must be in (0, 1]");
  if (!(model.params.shed_weight > 0)) issue("parameter W must be positive");
  if (model.params.demand_sigma < 0) issue("parameter sigma must be >= 0");
  if (!(model.base_mva > 0)) issue("base MVA must be positive");
  return report;
}

Islands connected_components(const NetworkModel& model,
                             const std::vector<bool>& line_in_service) {
  if (static_cast<int>(line_in_service.size()) != model.n_lines())
    throw std::invalid_argument("line service mask size mismatch");

  const int n = model.n_buses();
  std::vector<int> comp(n, -1);
  std::vector<int> stack;
  int n_comp = 0;
  for (int start = 0; start < n; ++start) {
    if (comp[start] >= 0) continue;
    comp[start] = n_comp;
    stack.push_back(start);
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      for (int l : model.lines_at_bus(b)) {
        if (!line_in_service[l]) continue;
        int other = model.line_other_end(l, b);
        if (comp[other] < 0) {
          comp[other] = n_comp;
          stack.push_back(other);
        }
      }
    }
    ++n_comp;
  }

  // Scanning buses in index order makes group k's smallest member the
  // smallest among components discovered at or after k, so groups are
  // already ordered by smallest bus index.
  Islands islands;
  islands.groups.assign(n_comp, {});
  islands.island_of = std::move(comp);
  for (int b = 0; b < n; ++b) islands.groups[islands.island_of[b]].push_back(b);
  return islands;
}

NetworkModel apply_loading_level(const NetworkModel& model, double level) {
  if (!(level > 0)) throw std::invalid_argument("loading level must be positive");
  NetworkModel scaled = model;
  for (auto& d : scaled.loads) d.peak_mw *= level;
  for (auto& g : scaled.generators) g.capacity_mw *= level;
  scaled.finalize();
  return scaled;
}

}  // namespace relsim
