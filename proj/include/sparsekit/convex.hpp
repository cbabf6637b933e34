#pragma once
// l1 machinery: basis pursuit through a standard-form LP, and Lasso / elastic
// net by cyclic coordinate descent on
//   ||Phi a - s||^2 + lambda * ( (1 - mix)/2 ||a||^2 + mix ||a||_1 ).

#include <optional>
#include <vector>

#include "sparsekit/core.hpp"
#include "sparsekit/lp.hpp"
#include "sparsekit/result.hpp"

namespace sparsekit {

// Split: free alpha and t split into positive parts plus slacks for
//   -t <= alpha <= t, giving 6m variables laid out as
//   [alpha+, t+, alpha-, t-, slack(alpha - t), slack(-alpha - t)].
// Compact: alpha = u - v with cost 1 on both, 2m variables, n rows.
enum class BpLayout { Split, Compact };

struct BpProgram {
  StandardFormLp lp;
  BpLayout layout = BpLayout::Split;
  Index atoms = 0;

  /// Offsets of alpha+ and alpha- inside the LP variable vector.
  Index plus_offset() const noexcept { return 0; }
  Index minus_offset() const noexcept { return layout == BpLayout::Split ? 2 * atoms : atoms; }
  Vector extract(const Vector& x) const;
};

BpProgram bp_formulate(const Frame& phi, const Signal& s, BpLayout layout = BpLayout::Split);

struct BpOptions {
  BpLayout layout = BpLayout::Split;
  LpOptions lp;
  double threshold = 1e-9;  // degenerate vertices leave ~1e-12 basics; report those as zero
};

/// l1-minimal alpha with Phi alpha = s. Throws NumericalError if s is not in
/// the range of Phi or the simplex hits its pivot cap. The warning
/// "alternate_optima" is raised only by the compact layout; the split layout
/// always has zero reduced costs from its free-variable split.
RecoveryResult basis_pursuit(const Frame& phi, const Signal& s, const BpOptions& options = {});

struct LassoConfig {
  double lambda = 0.0;
  double mix = 1.0;  // 1 = pure l1
  int max_sweeps = 100'000;
  double kkt_tol = 1e-9;
  std::optional<Vector> warm_start;
  // Between full sweeps, cycle over the non-zero coordinates only until they
  // settle. Convergence is still judged after full sweeps.
  bool active_set = false;

  void validate() const;
};

/// Objective value for `cfg.lambda` and `cfg.mix`.
double lasso_objective(const Frame& phi, const Signal& s, const Vector& alpha, const LassoConfig& cfg);

/// Largest violation of the optimality conditions at alpha.
double kkt_residual(const Frame& phi, const Signal& s, const Vector& alpha, const LassoConfig& cfg);

/// Smallest lambda with the zero solution for mix = 1: 2 ||Phi^T s||_inf.
double lasso_lambda_max(const Frame& phi, const Signal& s);

RecoveryResult bpdn_lasso(const Frame& phi, const Signal& s, const LassoConfig& cfg);
RecoveryResult elastic_net(const Frame& phi, const Signal& s, const LassoConfig& cfg);

/// Solves along `lambdas` (any order), warm-starting each from the previous.
std::vector<RecoveryResult> lasso_path(const Frame& phi, const Signal& s, const std::vector<double>& lambdas,
                                       const LassoConfig& base);

/// Geometric continuation from lasso_lambda_max down to ratio * lambda_max;
/// returns the last solution.
RecoveryResult lasso_continuation(const Frame& phi, const Signal& s, double ratio = 1e-6, int steps = 25,
                                  const LassoConfig& base = {});

}  // namespace sparsekit
