#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sparsekit/core.hpp"

namespace sparsekit {

/// Output of every sparse-recovery solver.
struct RecoveryResult {
  SparseCode code;
  double residual_norm = 0.0;  // ||Phi * code - s||_2, recomputed from `code`
  int iterations = 0;
  bool converged = false;
  /// Solver-specific per-iteration objective: residual norms for greedy
  /// methods, Lasso objective per sweep, ||delta alpha|| for relaxations.
  std::vector<double> objective_trace;
  /// Non-fatal conditions, e.g. "rank_deficient_support", "alternate_optima".
  std::vector<std::string> warnings;

  bool has_warning(const std::string& w) const;
};

/// Called with (iteration, current iterate) after each outer step of an
/// iterative solver; lets callers audit invariants without changing results.
using IterateObserver = std::function<void(int, const Vector&)>;

/// Residual ||Phi x - s||_2.
double residual_norm(const Frame& phi, const Vector& x, const Signal& s);

}  // namespace sparsekit
