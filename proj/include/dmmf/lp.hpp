#pragma once

// Dense two-phase primal simplex for small linear programs
//   maximize c^T x  subject to  A x <= b,  lower <= x <= upper.

#include <optional>
#include <vector>

namespace dmmf {

struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;  // A
  std::vector<double> rhs;                // b
  std::vector<double> lower;              // empty means all zero
  std::vector<std::optional<double>> upper;  // empty means unbounded above

  std::size_t num_vars() const { return objective.size(); }
  /// Throws std::invalid_argument on inconsistent dimensions.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective_value = 0;
};

/// Deterministic (Bland's rule) and total: infeasible and unbounded
/// programs are reported through `status`. Pivots below 1e-10 count as zero.
LpSolution solve_lp(const LinearProgram& lp);

/// Max violation of A x <= b and of the bounds (0 if feasible).
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

} // namespace dmmf
