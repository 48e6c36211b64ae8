#include "relsim/state.hpp"

namespace relsim {

void SystemState::init(const NetworkModel& m) {
  model = &m;
  clock_h = 0.0;
  hour = 0;
  gamma.assign(m.n_areas(), 1.0);
  rho.assign(m.n_areas(), 0.0);
  gens.assign(m.n_generators(), {});
  lines.assign(m.n_lines(), {});
  loads.assign(m.n_loads(), {});
  operators.assign(m.n_areas(), {});
  procedures.assign(m.n_lines(), {});
  restoration = {};
  theta.assign(m.n_buses(), 0.0);
  flow_mw.assign(m.n_lines(), 0.0);
  acct = {};
}

std::vector<bool> SystemState::line_service_mask() const {
  std::vector<bool> mask(lines.size());
  for (size_t l = 0; l < lines.size(); ++l) mask[l] = line_in_service(lines[l].fsm);
  return mask;
}

std::vector<bool> SystemState::gen_available() const {
  std::vector<bool> avail(gens.size());
  for (size_t g = 0; g < gens.size(); ++g) avail[g] = gens[g].fsm == GenFsm::Up;
  return avail;
}

std::vector<bool> SystemState::load_connected_mask() const {
  std::vector<bool> mask(loads.size());
  for (size_t i = 0; i < loads.size(); ++i) mask[i] = load_is_connected(static_cast<int>(i));
  return mask;
}

std::vector<double> SystemState::load_demands() const {
  std::vector<double> demand(loads.size());
  for (size_t i = 0; i < loads.size(); ++i) demand[i] = load_current_demand(static_cast<int>(i));
  return demand;
}

double SystemState::load_current_demand(int load_idx) const {
  if (!load_is_connected(load_idx)) return 0.0;
  const int area = model->bus_area(model->load_bus(load_idx));
  return load_demand(model->loads[load_idx].peak_mw, gamma[area], rho[area],
                     loads[load_idx].shed_mw);
}

double SystemState::load_hypothetical_demand(int load_idx) const {
  const int area = model->bus_area(model->load_bus(load_idx));
  return load_demand(model->loads[load_idx].peak_mw, gamma[area], rho[area], 0.0);
}

std::pair<double, double> island_balance(const NetworkModel& model, const SystemState& state,
                                         const std::vector<int>& island_buses) {
  double capacity = 0.0;
  double demand = 0.0;
  for (int bus : island_buses) {
    for (int g : model.gens_at_bus(bus))
      if (state.gens[g].fsm == GenFsm::Up) capacity += model.generators[g].capacity_mw;
    for (int i : model.loads_at_bus(bus)) demand += state.load_current_demand(i);
  }
  return {capacity, demand};
}

}  // namespace relsim
