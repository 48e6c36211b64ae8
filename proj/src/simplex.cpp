#include "relsim/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relsim::lp {

namespace {

enum class VarStatus { Basic, AtLower, AtUpper };

constexpr double kPivotEps = 1e-11;

struct Tableau {
  int m = 0;       // rows
  int n = 0;       // total columns (structural + slack + artificial)
  int n_struct = 0;
  std::vector<std::vector<double>> t;  // m x n, equals B^-1 A
  std::vector<double> beta;            // current basic variable values
  std::vector<double> upper;           // per column
  std::vector<VarStatus> status;
  std::vector<int> basis;              // row -> column
  std::vector<double> d1, d2;          // reduced costs, phase 1 and 2
  int first_artificial = 0;

  double ratio_eps = 1e-9;

  bool is_artificial(int j) const { return j >= first_artificial; }

  double phase1_objective() const {
    double z = 0.0;
    for (int i = 0; i < m; ++i)
      if (is_artificial(basis[i])) z += beta[i];
    return z;
  }

  // Bland's rule: smallest eligible column index.
  int pick_entering(const std::vector<double>& d, bool allow_artificial, double tol) const {
    for (int j = 0; j < n; ++j) {
      if (status[j] == VarStatus::Basic) continue;
      if (!allow_artificial && is_artificial(j)) continue;
      if (upper[j] <= 0.0) continue;  // fixed at zero, cannot move
      if (status[j] == VarStatus::AtLower && d[j] < -tol) return j;
      if (status[j] == VarStatus::AtUpper && d[j] > tol) return j;
    }
    return -1;
  }

  // Moves entering column j by the largest feasible step. Returns false on
  // an unbounded direction.
  bool step(int j) {
    const double sigma = status[j] == VarStatus::AtLower ? 1.0 : -1.0;
    double best_t = upper[j];  // bound-to-bound flip
    int leave_row = -1;
    for (int i = 0; i < m; ++i) {
      const double alpha = sigma * t[i][j];
      double limit = kInf;
      if (alpha > ratio_eps) {
        limit = beta[i] / alpha;
      } else if (alpha < -ratio_eps) {
        const double ub = upper[basis[i]];
        if (std::isfinite(ub)) limit = (ub - beta[i]) / (-alpha);
      }
      if (limit < -1e-12) limit = 0.0;
      if (limit < best_t - 1e-12 ||
          (leave_row >= 0 && std::abs(limit - best_t) <= 1e-12 && basis[i] < basis[leave_row])) {
        best_t = std::max(0.0, limit);
        leave_row = i;
      }
    }
    if (!std::isfinite(best_t)) return false;

    if (leave_row < 0) {
      // Bound flip, basis unchanged.
      for (int i = 0; i < m; ++i) beta[i] -= sigma * best_t * t[i][j];
      status[j] = status[j] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
      return true;
    }

    // Displace basic values, then eliminate column j from the tableau.
    const int leaving = basis[leave_row];
    const double entering_value =
        (status[j] == VarStatus::AtLower ? 0.0 : upper[j]) + sigma * best_t;
    for (int i = 0; i < m; ++i)
      if (i != leave_row) beta[i] -= sigma * best_t * t[i][j];
    const double alpha_leave = sigma * t[leave_row][j];
    status[leaving] = alpha_leave > 0 ? VarStatus::AtLower : VarStatus::AtUpper;
    if (is_artificial(leaving)) {
      // A departed artificial must never re-enter.
      upper[leaving] = 0.0;
      status[leaving] = VarStatus::AtLower;
    }
    beta[leave_row] = entering_value;
    basis[leave_row] = j;
    status[j] = VarStatus::Basic;

    const double piv = t[leave_row][j];
    auto& prow = t[leave_row];
    const double inv = 1.0 / piv;
    for (double& v : prow) v *= inv;
    prow[j] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == leave_row) continue;
      const double f = t[i][j];
      if (std::abs(f) < kPivotEps) {
        t[i][j] = 0.0;
        continue;
      }
      auto& row = t[i];
      for (int k = 0; k < n; ++k) row[k] -= f * prow[k];
      row[j] = 0.0;
    }
    for (auto* d : {&d1, &d2}) {
      const double f = (*d)[j];
      if (std::abs(f) < kPivotEps) {
        (*d)[j] = 0.0;
        continue;
      }
      for (int k = 0; k < n; ++k) (*d)[k] -= f * prow[k];
      (*d)[j] = 0.0;
    }
    return true;
  }
};

}  // namespace

Solution solve(const Problem& problem) {
  const int n_struct = problem.n_vars();
  const int m = static_cast<int>(problem.rows.size());

  Tableau tab;
  tab.m = m;
  tab.n_struct = n_struct;

  int n_slack = 0;
  for (const auto& row : problem.rows)
    if (row.sense == Sense::LessEqual) ++n_slack;

  // Column layout: structural | slacks | artificials (one per row; unused
  // ones get a zero column and stay fixed at zero).
  tab.first_artificial = n_struct + n_slack;
  tab.n = tab.first_artificial + m;
  tab.t.assign(m, std::vector<double>(tab.n, 0.0));
  tab.beta.assign(m, 0.0);
  tab.upper.assign(tab.n, kInf);
  tab.status.assign(tab.n, VarStatus::AtLower);
  tab.basis.assign(m, -1);
  tab.d1.assign(tab.n, 0.0);
  tab.d2.assign(tab.n, 0.0);

  double max_abs_cost = 1.0;
  for (int j = 0; j < n_struct; ++j) {
    if (problem.upper[j] < 0)
      throw std::invalid_argument("variable upper bound must be >= 0");
    tab.upper[j] = problem.upper[j];
    tab.d2[j] = problem.cost[j];
    max_abs_cost = std::max(max_abs_cost, std::abs(problem.cost[j]));
  }
  const double phase1_tol = 1e-9;
  const double phase2_tol = 1e-10 * max_abs_cost;

  double max_abs_rhs = 1.0;
  int slack_col = n_struct;
  for (int i = 0; i < m; ++i) {
    const auto& row = problem.rows[i];
    const double flip = row.rhs < 0 ? -1.0 : 1.0;
    for (const auto& [j, v] : row.terms) {
      if (j < 0 || j >= n_struct) throw std::out_of_range("row term references unknown variable");
      tab.t[i][j] += flip * v;
    }
    double rhs = flip * row.rhs;
    max_abs_rhs = std::max(max_abs_rhs, rhs);
    if (row.sense == Sense::LessEqual) tab.t[i][slack_col++] = flip;

    // Start from x = 0: a plus-one slack can carry the row, otherwise the
    // row's artificial does.
    if (row.sense == Sense::LessEqual && flip > 0) {
      const int s = slack_col - 1;
      tab.basis[i] = s;
      tab.status[s] = VarStatus::Basic;
      tab.beta[i] = rhs;
    } else {
      const int a = tab.first_artificial + i;
      tab.t[i][a] = 1.0;
      tab.basis[i] = a;
      tab.status[a] = VarStatus::Basic;
      tab.beta[i] = rhs;
      tab.d1[a] = 1.0;
    }
  }
  for (int j = tab.first_artificial; j < tab.n; ++j)
    if (tab.status[j] != VarStatus::Basic) tab.upper[j] = 0.0;

  // Price out the artificial basis from the phase-1 cost row.
  for (int i = 0; i < m; ++i) {
    if (!tab.is_artificial(tab.basis[i])) continue;
    for (int k = 0; k < tab.n; ++k) tab.d1[k] -= tab.t[i][k];
    tab.d1[tab.basis[i]] = 0.0;
  }

  Solution sol;
  const int iteration_cap = 20000 + 60 * (m + tab.n);

  // Phase 1: drive the artificials to zero.
  while (tab.phase1_objective() > 1e-7 * max_abs_rhs) {
    const int j = tab.pick_entering(tab.d1, true, phase1_tol);
    if (j < 0) break;
    if (!tab.step(j)) {
      sol.status = Status::Infeasible;
      return sol;
    }
    if (++sol.iterations > iteration_cap) {
      sol.status = Status::IterationLimit;
      return sol;
    }
  }
  if (tab.phase1_objective() > 1e-6 * max_abs_rhs) {
    sol.status = Status::Infeasible;
    return sol;
  }
  // Artificials may stay basic at zero but must never move again.
  for (int j = tab.first_artificial; j < tab.n; ++j) tab.upper[j] = 0.0;

  // Phase 2 on the real objective.
  while (true) {
    const int j = tab.pick_entering(tab.d2, false, phase2_tol);
    if (j < 0) break;
    if (!tab.step(j)) {
      sol.status = Status::Unbounded;
      return sol;
    }
    if (++sol.iterations > iteration_cap) {
      sol.status = Status::IterationLimit;
      return sol;
    }
  }

  sol.x.assign(n_struct, 0.0);
  for (int j = 0; j < n_struct; ++j)
    if (tab.status[j] == VarStatus::AtUpper) sol.x[j] = problem.upper[j];
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] < n_struct) sol.x[tab.basis[i]] = tab.beta[i];
  sol.objective = 0.0;
  for (int j = 0; j < n_struct; ++j) sol.objective += problem.cost[j] * sol.x[j];
  sol.status = Status::Optimal;
  return sol;
}

}  // namespace relsim::lp
