#pragma once
// Dense two-phase primal simplex for standard-form linear programs
//   min c^T x  s.t.  M x = b,  x >= 0.
//
// Pricing is Dantzig's most-negative reduced cost; as soon as a pivot is
// degenerate the solver switches to Bland's lowest-index rule and stays on it
// until the objective strictly improves, which rules out cycling.

#include <string_view>

#include "sparsekit/core.hpp"

namespace sparsekit {

struct StandardFormLp {
  Vector cost;         // c, length = variable count
  Matrix constraints;  // M, rows x variables
  Vector rhs;          // b

  Index variables() const noexcept { return cost.size(); }
  Index rows() const noexcept { return constraints.rows(); }
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(LpStatus status);

struct LpOptions {
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-11;
  double optimality_tol = 1e-10;
  long max_pivots = 200'000;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  long pivots = 0;
  /// Some non-basic column has zero reduced cost at the optimum.
  bool alternate_optima = false;
};

LpSolution lp_solve(const StandardFormLp& lp, const LpOptions& options = {});

}  // namespace sparsekit
