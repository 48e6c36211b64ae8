#pragma once

#include <cstdint>
#include <vector>

#include "relsim/model.hpp"

namespace relsim {

/// DC power flow result. Angles are scaled so that the flow on a line is
/// (theta_from - theta_to) / x directly in MW; each island's reference bus
/// (smallest bus index in the island) is pinned at zero.
struct FlowSolution {
  std::vector<double> theta;          // per bus
  std::vector<double> flow_mw;        // per line; 0 for out-of-service lines
  std::vector<int> reference_bus;     // per island
  int sweeps = 0;                     // fixed-point sweeps used (0 for direct)
  bool used_fallback = false;         // direct factorization took over
};

enum class FlowMethod {
  IterativeWithFallback,  // per-bus fixed point, direct solve if it stalls
  Direct,                 // factorize and solve immediately
};

/// Solves the DC flow for the given topology and nodal injections (MW).
/// Injections must balance to zero within each island (|sum| <= 1e-6 MW);
/// an unbalanced island signals a dispatch bug and throws.
FlowSolution solve_dc_flow(const NetworkModel& model,
                           const std::vector<bool>& line_in_service,
                           const std::vector<double>& injection_mw,
                           const Islands& islands,
                           FlowMethod method = FlowMethod::IterativeWithFallback,
                           const std::vector<double>* warm_start = nullptr);

/// Linearized flow sensitivities dP_line / dP_bus for a set of lines, with
/// each island's reference bus absorbing the balance. Valid only for the
/// topology it was computed on (see fingerprint).
struct SensitivityFactors {
  std::vector<int> lines;                          // scope, line indices
  std::vector<std::vector<double>> coeff;          // [scope row][bus]
  std::uint64_t topology_fingerprint = 0;

  const std::vector<double>& row_for(int line_idx) const;
};

/// Hash of the in-service mask; used to invalidate cached sensitivities.
std::uint64_t topology_fingerprint(const std::vector<bool>& line_in_service);

/// Computes sensitivity factors by the matrix method (one factorized solve
/// per scope line). Throws if a scope line is out of service.
SensitivityFactors sensitivity_factors(const NetworkModel& model,
                                       const std::vector<bool>& line_in_service,
                                       const std::vector<int>& scope_lines,
                                       const Islands& islands);

/// As above, but with an explicit reference bus per island (used by the
/// reference-invariance checks).
SensitivityFactors sensitivity_factors_with_reference(
    const NetworkModel& model, const std::vector<bool>& line_in_service,
    const std::vector<int>& scope_lines, const Islands& islands,
    const std::vector<int>& reference_bus);

struct FlowCheck {
  double max_nodal_residual_mw = 0.0;  // conservation violation
  double max_method_gap_mw = 0.0;      // iterative vs direct flow discrepancy
};

/// Conservation and oracle cross-check for a flow solution.
FlowCheck verify_flow(const FlowSolution& solution, const NetworkModel& model,
                      const std::vector<bool>& line_in_service,
                      const std::vector<double>& injection_mw,
                      const Islands& islands);

}  // namespace relsim
