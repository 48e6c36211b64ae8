#include "relsim/powerflow.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace relsim {

namespace {

constexpr double kBalanceTolMw = 1e-6;
constexpr double kSweepTol = 1e-9;
constexpr int kMaxSweeps = 100000;

void check_island_balance(const NetworkModel& model, const std::vector<double>& injection_mw,
                          const Islands& islands) {
  for (const auto& group : islands.groups) {
    double sum = 0.0;
    for (int b : group) sum += injection_mw[b];
    if (std::abs(sum) > kBalanceTolMw)
      throw std::logic_error("island injections do not balance (" + std::to_string(sum) +
                             " MW); dispatch must balance each island");
  }
}

// Reduced susceptance matrix of one island (reference row/column removed).
// pos maps bus index -> row in the reduced system, -1 for the reference.
Eigen::MatrixXd reduced_matrix(const NetworkModel& model, const std::vector<bool>& in_service,
                               const std::vector<int>& group, const std::vector<int>& pos) {
  const int m = static_cast<int>(group.size()) - 1;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
  for (int bus : group) {
    for (int l : model.lines_at_bus(bus)) {
      if (!in_service[l]) continue;
      const int from = model.line_from(l);
      if (from != bus) continue;  // visit each line once
      const int to = model.line_to(l);
      const double w = 1.0 / model.lines[l].reactance_pu;
      const int pf = pos[from];
      const int pt = pos[to];
      if (pf >= 0) b(pf, pf) += w;
      if (pt >= 0) b(pt, pt) += w;
      if (pf >= 0 && pt >= 0) {
        b(pf, pt) -= w;
        b(pt, pf) -= w;
      }
    }
  }
  return b;
}

void solve_island_direct(const NetworkModel& model, const std::vector<bool>& in_service,
                         const std::vector<double>& injection_mw,
                         const std::vector<int>& group, int reference,
                         std::vector<double>& theta) {
  std::vector<int> pos(model.n_buses(), -1);
  int r = 0;
  for (int bus : group)
    if (bus != reference) pos[bus] = r++;
  theta[reference] = 0.0;
  if (r == 0) return;

  Eigen::MatrixXd b = reduced_matrix(model, in_service, group, pos);
  Eigen::VectorXd rhs(r);
  for (int bus : group)
    if (pos[bus] >= 0) rhs(pos[bus]) = injection_mw[bus];
  Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(b).solve(rhs);
  for (int bus : group)
    if (pos[bus] >= 0) theta[bus] = x(pos[bus]);
}

double max_nodal_residual(const NetworkModel& model, const std::vector<bool>& in_service,
                          const std::vector<double>& injection_mw,
                          const std::vector<double>& theta, const std::vector<int>& group,
                          int reference) {
  double worst = 0.0;
  for (int bus : group) {
    if (bus == reference) continue;  // the reference absorbs the balance
    double out = 0.0;
    for (int l : model.lines_at_bus(bus)) {
      if (!in_service[l]) continue;
      const int other = model.line_other_end(l, bus);
      out += (theta[bus] - theta[other]) / model.lines[l].reactance_pu;
    }
    worst = std::max(worst, std::abs(out - injection_mw[bus]));
  }
  return worst;
}

}  // namespace

FlowSolution solve_dc_flow(const NetworkModel& model, const std::vector<bool>& line_in_service,
                           const std::vector<double>& injection_mw, const Islands& islands,
                           FlowMethod method, const std::vector<double>* warm_start) {
  if (static_cast<int>(injection_mw.size()) != model.n_buses())
    throw std::invalid_argument("injection vector size mismatch");
  check_island_balance(model, injection_mw, islands);

  FlowSolution sol;
  sol.theta.assign(model.n_buses(), 0.0);
  if (warm_start && static_cast<int>(warm_start->size()) == model.n_buses())
    sol.theta = *warm_start;
  sol.reference_bus.reserve(islands.groups.size());

  for (const auto& group : islands.groups) {
    const int reference = group.front();  // groups are sorted
    sol.reference_bus.push_back(reference);
    sol.theta[reference] = 0.0;
    if (group.size() == 1) continue;

    if (method == FlowMethod::Direct) {
      solve_island_direct(model, line_in_service, injection_mw, group, reference, sol.theta);
      continue;
    }

    // Per-bus fixed point: theta_a = (P_a + sum_b theta_b / x_ab) / sum_b (1/x_ab),
    // swept in bus-index order with the reference pinned at zero.
    bool converged = false;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
      double max_change = 0.0;
      for (int bus : group) {
        if (bus == reference) continue;
        double wsum = 0.0;
        double acc = injection_mw[bus];
        for (int l : model.lines_at_bus(bus)) {
          if (!line_in_service[l]) continue;
          const double w = 1.0 / model.lines[l].reactance_pu;
          acc += w * sol.theta[model.line_other_end(l, bus)];
          wsum += w;
        }
        const double next = acc / wsum;
        max_change = std::max(max_change, std::abs(next - sol.theta[bus]));
        sol.theta[bus] = next;
      }
      if (max_change < kSweepTol) {
        // The update-size test alone can stop early on slowly contracting
        // systems; accept only once conservation actually holds.
        if (max_nodal_residual(model, line_in_service, injection_mw, sol.theta, group,
                               reference) < 1e-7) {
          converged = true;
          ++sweep;
          break;
        }
      }
    }
    sol.sweeps += sweep;
    if (!converged) {
      sol.used_fallback = true;
      solve_island_direct(model, line_in_service, injection_mw, group, reference, sol.theta);
    }
  }

  sol.flow_mw.assign(model.n_lines(), 0.0);
  for (int l = 0; l < model.n_lines(); ++l) {
    if (!line_in_service[l]) continue;
    sol.flow_mw[l] =
        (sol.theta[model.line_from(l)] - sol.theta[model.line_to(l)]) / model.lines[l].reactance_pu;
  }
  return sol;
}

std::uint64_t topology_fingerprint(const std::vector<bool>& line_in_service) {
  std::uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < line_in_service.size(); ++i) {
    h ^= line_in_service[i] ? 0x9Eu : 0x31u;
    h *= 1099511628211ull;
  }
  return h;
}

const std::vector<double>& SensitivityFactors::row_for(int line_idx) const {
  for (size_t i = 0; i < lines.size(); ++i)
    if (lines[i] == line_idx) return coeff[i];
  throw std::out_of_range("line not in sensitivity scope");
}

SensitivityFactors sensitivity_factors_with_reference(
    const NetworkModel& model, const std::vector<bool>& line_in_service,
    const std::vector<int>& scope_lines, const Islands& islands,
    const std::vector<int>& reference_bus) {
  SensitivityFactors sf;
  sf.lines = scope_lines;
  sf.topology_fingerprint = topology_fingerprint(line_in_service);
  sf.coeff.assign(scope_lines.size(), std::vector<double>(model.n_buses(), 0.0));

  // Group scope lines by island so each island is factorized once.
  std::vector<std::vector<int>> rows_per_island(islands.groups.size());
  for (size_t row = 0; row < scope_lines.size(); ++row) {
    const int l = scope_lines[row];
    if (!line_in_service[l]) throw std::invalid_argument("scope line out of service");
    rows_per_island[islands.island_of[model.line_from(l)]].push_back(static_cast<int>(row));
  }

  for (size_t isl = 0; isl < islands.groups.size(); ++isl) {
    if (rows_per_island[isl].empty()) continue;
    const auto& group = islands.groups[isl];
    const int reference = reference_bus[isl];
    std::vector<int> pos(model.n_buses(), -1);
    int r = 0;
    for (int bus : group)
      if (bus != reference) pos[bus] = r++;
    if (r == 0) continue;  // single-bus island: all sensitivities are zero

    Eigen::MatrixXd b = reduced_matrix(model, line_in_service, group, pos);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    for (int row : rows_per_island[isl]) {
      const int l = sf.lines[row];
      const int from = model.line_from(l);
      const int to = model.line_to(l);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r);
      if (pos[from] >= 0) rhs(pos[from]) += 1.0;
      if (pos[to] >= 0) rhs(pos[to]) -= 1.0;
      Eigen::VectorXd w = lu.solve(rhs);
      const double inv_x = 1.0 / model.lines[l].reactance_pu;
      for (int bus : group)
        if (pos[bus] >= 0) sf.coeff[row][bus] = inv_x * w(pos[bus]);
    }
  }
  return sf;
}

SensitivityFactors sensitivity_factors(const NetworkModel& model,
                                       const std::vector<bool>& line_in_service,
                                       const std::vector<int>& scope_lines,
                                       const Islands& islands) {
  std::vector<int> refs;
  refs.reserve(islands.groups.size());
  for (const auto& group : islands.groups) refs.push_back(group.front());
  return sensitivity_factors_with_reference(model, line_in_service, scope_lines, islands, refs);
}

FlowCheck verify_flow(const FlowSolution& solution, const NetworkModel& model,
                      const std::vector<bool>& line_in_service,
                      const std::vector<double>& injection_mw, const Islands& islands) {
  FlowCheck check;
  for (int bus = 0; bus < model.n_buses(); ++bus) {
    const int isl = islands.island_of[bus];
    if (solution.reference_bus[isl] == bus) continue;
    double out = 0.0;
    for (int l : model.lines_at_bus(bus)) {
      if (!line_in_service[l]) continue;
      const int sign = model.line_from(l) == bus ? 1 : -1;
      out += sign * solution.flow_mw[l];
    }
    check.max_nodal_residual_mw =
        std::max(check.max_nodal_residual_mw, std::abs(out - injection_mw[bus]));
  }

  FlowSolution direct =
      solve_dc_flow(model, line_in_service, injection_mw, islands, FlowMethod::Direct);
  for (int l = 0; l < model.n_lines(); ++l)
    check.max_method_gap_mw =
        std::max(check.max_method_gap_mw, std::abs(solution.flow_mw[l] - direct.flow_mw[l]));
  return check;
}

}  // namespace relsim
