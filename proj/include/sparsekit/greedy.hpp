#pragma once
// Greedy atom selection: matching pursuit (MP), orthogonal matching pursuit
// (OMP) and least-squares OMP (LS-OMP). All three require unit-norm atoms and
// break ties in favour of the lowest atom index.

#include <optional>

#include "sparsekit/core.hpp"
#include "sparsekit/result.hpp"

namespace sparsekit {

struct StopRule {
  std::optional<Index> max_sparsity;  // stop once this many distinct atoms are in use
  std::optional<double> residual_tol; // stop once ||r|| <= residual_tol * ||s||
  int max_iterations = 1000;

  /// residual_tol 1e-10 and max_sparsity n: the noiseless default.
  static StopRule noiseless(Index n);
  /// max_sparsity k with the noiseless residual tolerance.
  static StopRule sparsity(Index k);
  void validate() const;
};

RecoveryResult mp(const Frame& phi, const Signal& s, const StopRule& stop);
RecoveryResult omp(const Frame& phi, const Signal& s, const StopRule& stop);
RecoveryResult ls_omp(const Frame& phi, const Signal& s, const StopRule& stop);

}  // namespace sparsekit
