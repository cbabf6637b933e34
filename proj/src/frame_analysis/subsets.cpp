#include <algorithm>
#include <cmath>

#include "sparsekit/combinations.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/frame_analysis.hpp"
#include "sparsekit/lp.hpp"

namespace sparsekit {
namespace {

constexpr double kRankTol = 1e-10;

void check_width(const Frame& phi, const ExhaustiveLimits& limits, const char* what) {
  if (phi.cols() > limits.max_columns) {
    throw LimitExceeded(std::string(what) + ": m = " + std::to_string(phi.cols()) + " exceeds the limit of " +
                        std::to_string(limits.max_columns) + " columns for exhaustive search");
  }
}

class SubsetBudget {
 public:
  SubsetBudget(std::uint64_t cap, const char* what) : cap_(cap), what_(what) {}
  void charge(std::uint64_t n) {
    if (n > cap_ - used_) {
      throw LimitExceeded(std::string(what_) + ": more than " + std::to_string(cap_) +
                          " subsets required for exhaustive search");
    }
    used_ += n;
  }

 private:
  std::uint64_t cap_;
  std::uint64_t used_ = 0;
  const char* what_;
};

bool independent_svd(const Frame& phi, const std::vector<Index>& cols) {
  const Matrix sub = select_columns(phi, cols);
  return numerical_rank(sub, kRankTol) == static_cast<Index>(cols.size());
}

bool independent_qr(const Frame& phi, const std::vector<Index>& cols) {
  const Matrix sub = select_columns(phi, cols);
  if (sub.norm() == 0.0) return false;
  Eigen::ColPivHouseholderQR<Matrix> qr(sub);
  qr.setThreshold(kRankTol);
  return qr.rank() == static_cast<Index>(cols.size());
}

}  // namespace

Index spark(const Frame& phi, const ExhaustiveLimits& limits) {
  check_width(phi, limits, "spark");
  const Index n = phi.rows();
  const Index m = phi.cols();
  SubsetBudget budget(limits.max_subsets, "spark");
  for (Index k = 1; k <= m; ++k) {
    if (k > n) return k;  // any n+1 vectors in R^n are dependent
    budget.charge(binomial(m, k));
    const bool all_independent =
        for_each_combination(m, k, [&](const std::vector<Index>& s) { return independent_svd(phi, s); });
    if (!all_independent) return k;
  }
  return m + 1;
}

Index krank(const Frame& phi, const ExhaustiveLimits& limits) {
  check_width(phi, limits, "krank");
  const Index n = phi.rows();
  const Index m = phi.cols();
  SubsetBudget budget(limits.max_subsets, "krank");
  const Index top = std::min(n, m);
  for (Index k = 1; k <= top; ++k) {
    budget.charge(binomial(m, k));
    const bool ok = for_each_combination(m, k, [&](const std::vector<Index>& s) { return independent_qr(phi, s); });
    if (!ok) return k - 1;
  }
  return top;
}

double ric(const Frame& phi, Index k, const ExhaustiveLimits& limits) {
  const Index m = phi.cols();
  if (k < 1 || k > m) throw InvalidArgument("ric: k must lie in [1, m]");
  // Eigenvalues of principal Gram submatrices interlace, so the maximum over
  // |S| <= k is attained on some |S| = k.
  SubsetBudget budget(limits.max_subsets, "ric");
  budget.charge(binomial(m, k));
  double delta = 0.0;
  for_each_combination(m, k, [&](const std::vector<Index>& s) {
    const Vector sv = select_columns(phi, s).jacobiSvd().singularValues();
    const double smax = sv[0];
    const double smin = k > phi.rows() ? 0.0 : sv[sv.size() - 1];
    delta = std::max({delta, smax * smax - 1.0, 1.0 - smin * smin});
    return true;
  });
  return delta;
}

double nsp_constant(const Frame& phi, Index k, const ExhaustiveLimits& limits) {
  const Index n = phi.rows();
  const Index m = phi.cols();
  if (k < 1 || k > m) throw InvalidArgument("nsp_constant: k must lie in [1, m]");
  if (numerical_rank(phi, kRankTol) == m) return 0.0;  // trivial kernel

  // ||z_S||_1 grows and ||z_{S^c}||_1 shrinks as S grows, so |S| = k suffices.
  const std::uint64_t patterns = std::uint64_t{1} << (k - 1);
  SubsetBudget budget(limits.max_subsets, "nsp_constant");
  const std::uint64_t supports = binomial(m, k);
  if (supports > limits.max_subsets / patterns) budget.charge(limits.max_subsets + 1);
  budget.charge(supports * patterns);

  // Variables: z+ (m), z- (m), slack w. Rows: Phi z+ - Phi z- = 0 and
  // sum_{i not in S} (z+_i + z-_i) + w = 1.
  StandardFormLp lp;
  lp.constraints = Matrix::Zero(n + 1, 2 * m + 1);
  lp.constraints.block(0, 0, n, m) = phi;
  lp.constraints.block(0, m, n, m) = -phi;
  lp.constraints(n, 2 * m) = 1.0;
  lp.rhs = Vector::Zero(n + 1);
  lp.rhs[n] = 1.0;

  double gamma = 0.0;
  bool unbounded = false;
  for_each_combination(m, k, [&](const std::vector<Index>& s) {
    std::vector<bool> in_s(static_cast<std::size_t>(m), false);
    for (Index i : s) in_s[static_cast<std::size_t>(i)] = true;
    for (Index i = 0; i < m; ++i) {
      const double v = in_s[static_cast<std::size_t>(i)] ? 0.0 : 1.0;
      lp.constraints(n, i) = v;
      lp.constraints(n, m + i) = v;
    }
    // z -> -z maps a sign pattern to its negation, so fix the first sign.
    for (std::uint64_t pattern = 0; pattern < patterns; ++pattern) {
      lp.cost = Vector::Zero(2 * m + 1);
      for (Index t = 0; t < k; ++t) {
        const double sign = t == 0 ? 1.0 : ((pattern >> (t - 1)) & 1U ? -1.0 : 1.0);
        const Index i = s[static_cast<std::size_t>(t)];
        lp.cost[i] = -sign;
        lp.cost[m + i] = sign;
      }
      const LpSolution sol = lp_solve(lp);
      if (sol.status == LpStatus::Unbounded) {
        unbounded = true;
        return false;
      }
      if (sol.status != LpStatus::Optimal) {
        throw NumericalError("nsp_constant: LP " + std::string(to_string(sol.status)));
      }
      gamma = std::max(gamma, -sol.objective);
    }
    return true;
  });
  return unbounded ? kInfinity : gamma;
}

}  // namespace sparsekit
