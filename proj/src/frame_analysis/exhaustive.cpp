#include <cmath>

#include "sparsekit/combinations.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/frame_analysis.hpp"

namespace sparsekit {

RecoveryResult exhaustive_p0(const Frame& phi, const Signal& s, Index k_max, const P0Limits& limits) {
  const Index m = phi.cols();
  if (s.size() != phi.rows()) throw InvalidArgument("exhaustive_p0: signal length != frame rows");
  if (k_max < 0 || k_max > m) throw InvalidArgument("exhaustive_p0: k_max must lie in [0, m]");
  std::uint64_t total = 0;
  for (Index k = 0; k <= k_max; ++k) {
    const std::uint64_t c = binomial(m, k);
    if (c > limits.max_supports - total) {
      throw LimitExceeded("exhaustive_p0: more than " + std::to_string(limits.max_supports) +
                          " supports for k_max = " + std::to_string(k_max));
    }
    total += c;
  }

  const double exact_tol = limits.exact_tol * std::max(1.0, s.norm());
  Vector best = Vector::Zero(m);
  double best_residual = s.norm();
  int examined = 1;
  bool exact = best_residual <= exact_tol;

  // Supports are visited by size, then lexicographically, so the first exact
  // fit is the preferred one and strict '<' keeps the earliest on ties.
  for (Index k = 1; k <= k_max && !exact; ++k) {
    for_each_combination(m, k, [&](const std::vector<Index>& support) {
      ++examined;
      const Matrix sub = select_columns(phi, support);
      const Vector coef = least_squares(sub, s);
      const double r = (sub * coef - s).norm();
      if (r < best_residual) {
        best_residual = r;
        best.setZero();
        for (std::size_t t = 0; t < support.size(); ++t) best[support[t]] = coef[static_cast<Index>(t)];
      }
      if (r <= exact_tol) {
        exact = true;
        return false;
      }
      return true;
    });
  }

  RecoveryResult out;
  out.code = SparseCode(best);
  out.residual_norm = residual_norm(phi, out.code.values(), s);
  out.iterations = examined;
  out.converged = exact;
  out.objective_trace = {best_residual};
  return out;
}

}  // namespace sparsekit
