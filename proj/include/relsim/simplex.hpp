#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace relsim::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, Equal };

/// Linear program  min c.x  s.t. rows, 0 <= x <= upper.
struct Problem {
  std::vector<double> cost;
  std::vector<double> upper;
  struct Row {
    std::vector<std::pair<int, double>> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
  };
  std::vector<Row> rows;

  int n_vars() const { return static_cast<int>(cost.size()); }
  int add_var(double c, double ub) {
    cost.push_back(c);
    upper.push_back(ub);
    return n_vars() - 1;
  }
  void add_row(std::vector<std::pair<int, double>> terms, Sense sense, double rhs) {
    rows.push_back({std::move(terms), sense, rhs});
  }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
  Status status = Status::IterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

/// Two-phase primal simplex with implicit variable bounds and Bland's
/// smallest-index rule. Deterministic: identical problems produce identical
/// solution vectors.
Solution solve(const Problem& problem);

}  // namespace relsim::lp
