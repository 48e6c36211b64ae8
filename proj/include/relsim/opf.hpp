#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relsim/model.hpp"
#include "relsim/powerflow.hpp"
#include "relsim/simplex.hpp"

namespace relsim {

enum class OpfScope { TieLine, IntraArea };

/// Snapshot of the quantities the corrective optimization works on.
struct OpfInputs {
  std::vector<bool> line_in_service;
  std::vector<double> flow_mw;         // per line
  std::vector<double> gen_output_mw;   // per generator, 0 when down
  std::vector<bool> gen_available;
  std::vector<double> load_demand_mw;  // per load, current (shed-reduced) demand
  std::vector<bool> load_connected;
};

/// The weighted redispatch/shedding LP for one overload procedure.
struct CorrectiveLpProblem {
  OpfScope scope = OpfScope::IntraArea;
  int target_line = -1;
  std::vector<int> constraint_lines;  // in-scope lines currently at or above rating
  std::vector<int> gens;              // participating generators (model indices)
  std::vector<int> sheddable_loads;   // loads with a shed variable
  std::vector<double> omega;          // distance weight per bus
  std::vector<double> flow_mw;        // flows the constraints were linearized at
  double xi = 0.8;
  double shed_weight = 1.0e4;
  std::uint64_t built_for_fingerprint = 0;
  int n_model_generators = 0;
  int n_model_loads = 0;

  lp::Problem lp;
  std::vector<int> var_up, var_dn;  // |dP| split, indexed like gens
  std::vector<int> var_shed;        // indexed like sheddable_loads
};

struct CorrectiveLpSolution {
  enum class Status { Optimal, Infeasible };
  Status status = Status::Infeasible;
  std::vector<double> delta_p_mw;  // per generator
  std::vector<double> delta_d_mw;  // per load
  double objective = 0.0;
  int iterations = 0;
};

/// Assembles the corrective LP for the given overloaded line. Scope rules:
/// for a tie-line the participating buses span the two adjacent control
/// areas (weights 1 at the line ends, 10 one line away, 100 elsewhere);
/// within one area only that area's loads may be shed (weights 1 inside,
/// 100 outside). All available generators of the line's island participate.
/// The sensitivities must carry the live topology's fingerprint.
CorrectiveLpProblem build_problem(const NetworkModel& model, const OpfInputs& inputs,
                                  const Islands& islands, int target_line, OpfScope scope,
                                  const SensitivityFactors& sensitivities);

CorrectiveLpSolution solve(const CorrectiveLpProblem& problem);

struct ConstraintReport {
  bool ok = true;
  double max_residual = 0.0;  // worst violation over balance, bounds, line limits
  std::vector<std::string> violations;
};

/// Checks the balance, box and line-limit constraints of a solved instance.
ConstraintReport verify_solution(const CorrectiveLpProblem& problem,
                                 const CorrectiveLpSolution& solution);

/// Plain-text dump of an LP instance (one line per variable and row) for
/// external cross-checks.
std::string dump_problem(const CorrectiveLpProblem& problem, const NetworkModel& model);

}  // namespace relsim
