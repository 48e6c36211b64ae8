#include "relsim/opf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace relsim {

namespace {

// Distance weights around the overloaded line, on the live topology.
std::vector<double> distance_weights(const NetworkModel& model, const OpfInputs& inputs,
                                     int target_line, OpfScope scope) {
  std::vector<double> omega(model.n_buses(), 100.0);
  const int from = model.line_from(target_line);
  const int to = model.line_to(target_line);
  if (scope == OpfScope::IntraArea) {
    const int area = model.bus_area(from);
    for (int b = 0; b < model.n_buses(); ++b)
      if (model.bus_area(b) == area) omega[b] = 1.0;
    return omega;
  }
  for (int end : {from, to}) {
    for (int l : model.lines_at_bus(end)) {
      if (!inputs.line_in_service[l] || l == target_line) continue;
      const int nb = model.line_other_end(l, end);
      if (omega[nb] > 10.0) omega[nb] = 10.0;
    }
  }
  omega[from] = 1.0;
  omega[to] = 1.0;
  return omega;
}

}  // namespace

CorrectiveLpProblem build_problem(const NetworkModel& model, const OpfInputs& inputs,
                                  const Islands& islands, int target_line, OpfScope scope,
                                  const SensitivityFactors& sensitivities) {
  if (sensitivities.topology_fingerprint != topology_fingerprint(inputs.line_in_service))
    throw std::logic_error("sensitivity factors are stale for the live topology");

  CorrectiveLpProblem prob;
  prob.scope = scope;
  prob.target_line = target_line;
  prob.xi = model.params.xi;
  prob.shed_weight = model.params.shed_weight;
  prob.built_for_fingerprint = sensitivities.topology_fingerprint;
  prob.flow_mw = inputs.flow_mw;
  prob.omega = distance_weights(model, inputs, target_line, scope);
  prob.n_model_generators = model.n_generators();
  prob.n_model_loads = model.n_loads();

  const int island = islands.island_of[model.line_from(target_line)];

  std::set<int> scope_areas;
  scope_areas.insert(model.bus_area(model.line_from(target_line)));
  scope_areas.insert(model.bus_area(model.line_to(target_line)));

  auto bus_in_scope = [&](int bus) { return scope_areas.count(model.bus_area(bus)) > 0; };

  // Constraint rows: in-scope lines currently at or above their rating.
  for (int l = 0; l < model.n_lines(); ++l) {
    if (!inputs.line_in_service[l]) continue;
    if (islands.island_of[model.line_from(l)] != island) continue;
    if (!bus_in_scope(model.line_from(l)) || !bus_in_scope(model.line_to(l))) continue;
    if (std::abs(inputs.flow_mw[l]) >= model.lines[l].rating_mw) prob.constraint_lines.push_back(l);
  }

  // Participants: every available generator of the island; sheddable loads
  // restricted to the target area in the intra-area case.
  for (int g = 0; g < model.n_generators(); ++g) {
    if (!inputs.gen_available[g]) continue;
    if (islands.island_of[model.gen_bus(g)] != island) continue;
    prob.gens.push_back(g);
  }
  for (int i = 0; i < model.n_loads(); ++i) {
    if (!inputs.load_connected[i]) continue;
    const int bus = model.load_bus(i);
    if (islands.island_of[bus] != island) continue;
    if (scope == OpfScope::IntraArea && !bus_in_scope(bus)) continue;
    if (inputs.load_demand_mw[i] <= 0) continue;
    prob.sheddable_loads.push_back(i);
  }

  // Variables: dP = up - dn per generator, shed per load.
  prob.var_up.reserve(prob.gens.size());
  prob.var_dn.reserve(prob.gens.size());
  for (int g : prob.gens) {
    const double w = prob.omega[model.gen_bus(g)];
    const double headroom = std::max(0.0, model.generators[g].capacity_mw - inputs.gen_output_mw[g]);
    const double backroom = std::max(0.0, inputs.gen_output_mw[g]);
    prob.var_up.push_back(prob.lp.add_var(w, headroom));
    prob.var_dn.push_back(prob.lp.add_var(w, backroom));
  }
  prob.var_shed.reserve(prob.sheddable_loads.size());
  for (int i : prob.sheddable_loads) {
    const double w = prob.shed_weight * prob.omega[model.load_bus(i)];
    prob.var_shed.push_back(prob.lp.add_var(w, inputs.load_demand_mw[i]));
  }

  // Balance: sum dP = -sum dD.
  {
    std::vector<std::pair<int, double>> terms;
    for (size_t k = 0; k < prob.gens.size(); ++k) {
      terms.emplace_back(prob.var_up[k], 1.0);
      terms.emplace_back(prob.var_dn[k], -1.0);
    }
    for (size_t k = 0; k < prob.sheddable_loads.size(); ++k)
      terms.emplace_back(prob.var_shed[k], 1.0);
    prob.lp.add_row(std::move(terms), lp::Sense::Equal, 0.0);
  }

  // Line limits: |flow + sum_a a_l_a (dP_a + dD_a)| <= xi * rating.
  for (int l : prob.constraint_lines) {
    const auto& a = sensitivities.row_for(l);
    std::vector<std::pair<int, double>> terms;
    for (size_t k = 0; k < prob.gens.size(); ++k) {
      const double c = a[model.gen_bus(prob.gens[k])];
      if (c == 0.0) continue;
      terms.emplace_back(prob.var_up[k], c);
      terms.emplace_back(prob.var_dn[k], -c);
    }
    for (size_t k = 0; k < prob.sheddable_loads.size(); ++k) {
      const double c = a[model.load_bus(prob.sheddable_loads[k])];
      if (c == 0.0) continue;
      terms.emplace_back(prob.var_shed[k], c);
    }
    const double limit = prob.xi * model.lines[l].rating_mw;
    auto neg = terms;
    for (auto& [j, v] : neg) v = -v;
    prob.lp.add_row(std::move(terms), lp::Sense::LessEqual, limit - inputs.flow_mw[l]);
    prob.lp.add_row(std::move(neg), lp::Sense::LessEqual, limit + inputs.flow_mw[l]);
  }
  return prob;
}

CorrectiveLpSolution solve(const CorrectiveLpProblem& problem) {
  CorrectiveLpSolution sol;
  lp::Solution raw = lp::solve(problem.lp);
  sol.iterations = raw.iterations;
  if (raw.status != lp::Status::Optimal) return sol;  // infeasible-with-diagnostics
  sol.status = CorrectiveLpSolution::Status::Optimal;
  sol.objective = raw.objective;
  sol.delta_p_mw.assign(problem.n_model_generators, 0.0);
  sol.delta_d_mw.assign(problem.n_model_loads, 0.0);
  for (size_t k = 0; k < problem.gens.size(); ++k)
    sol.delta_p_mw[problem.gens[k]] = raw.x[problem.var_up[k]] - raw.x[problem.var_dn[k]];
  for (size_t k = 0; k < problem.sheddable_loads.size(); ++k)
    sol.delta_d_mw[problem.sheddable_loads[k]] = raw.x[problem.var_shed[k]];
  return sol;
}

ConstraintReport verify_solution(const CorrectiveLpProblem& problem,
                                 const CorrectiveLpSolution& solution) {
  ConstraintReport report;
  auto flag = [&report](double violation, const std::string& what) {
    report.max_residual = std::max(report.max_residual, violation);
    if (violation > 1e-6) {
      report.ok = false;
      report.violations.push_back(what);
    }
  };

  // Canonical variable values; the row coefficients of up/dn are opposite,
  // so any optimal split evaluates identically.
  std::vector<double> x(problem.lp.n_vars(), 0.0);
  for (size_t k = 0; k < problem.gens.size(); ++k) {
    const double dp = solution.delta_p_mw[problem.gens[k]];
    x[problem.var_up[k]] = std::max(0.0, dp);
    x[problem.var_dn[k]] = std::max(0.0, -dp);
    flag(std::max(0.0, dp - problem.lp.upper[problem.var_up[k]]), "dP above headroom");
    flag(std::max(0.0, -dp - problem.lp.upper[problem.var_dn[k]]), "dP below -P(t)");
  }
  for (size_t k = 0; k < problem.sheddable_loads.size(); ++k) {
    const double dd = solution.delta_d_mw[problem.sheddable_loads[k]];
    x[problem.var_shed[k]] = dd;
    flag(std::max(0.0, -dd), "negative shed");
    flag(std::max(0.0, dd - problem.lp.upper[problem.var_shed[k]]), "shed above demand");
  }

  for (size_t r = 0; r < problem.lp.rows.size(); ++r) {
    const auto& row = problem.lp.rows[r];
    double lhs = 0.0;
    for (const auto& [j, v] : row.terms) lhs += v * x[j];
    if (row.sense == lp::Sense::Equal)
      flag(std::abs(lhs - row.rhs), "balance row violated");
    else
      flag(std::max(0.0, lhs - row.rhs), "line limit row " + std::to_string(r) + " violated");
  }
  return report;
}

std::string dump_problem(const CorrectiveLpProblem& problem, const NetworkModel& model) {
  std::ostringstream os;
  os << "CORRECTIVE_LP v1\n";
  os << "scope " << (problem.scope == OpfScope::TieLine ? "tie-line" : "intra-area") << " target_line "
     << model.lines[problem.target_line].id << "\n";
  os << "vars " << problem.lp.n_vars() << "\n";
  for (size_t k = 0; k < problem.gens.size(); ++k) {
    const auto& g = model.generators[problem.gens[k]];
    os << "var dP+ gen " << g.id << " cost " << problem.lp.cost[problem.var_up[k]] << " upper "
       << problem.lp.upper[problem.var_up[k]] << "\n";
    os << "var dP- gen " << g.id << " cost " << problem.lp.cost[problem.var_dn[k]] << " upper "
       << problem.lp.upper[problem.var_dn[k]] << "\n";
  }
  for (size_t k = 0; k < problem.sheddable_loads.size(); ++k) {
    const auto& d = model.loads[problem.sheddable_loads[k]];
    os << "var dD load " << d.id << " cost " << problem.lp.cost[problem.var_shed[k]] << " upper "
       << problem.lp.upper[problem.var_shed[k]] << "\n";
  }
  for (const auto& row : problem.lp.rows) {
    os << "row " << (row.sense == lp::Sense::Equal ? "=" : "<=") << " " << row.rhs;
    for (const auto& [j, v] : row.terms) os << " " << j << ":" << v;
    os << "\n";
  }
  return os.str();
}

}  // namespace relsim
