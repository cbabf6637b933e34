#pragma once
// Frame-quality measures and the recovery-condition checks built on them.
//
// Spark, Kruskal rank, restricted isometry constants and the null space
// constant are NP-hard in general; here they are computed exactly by subset
// enumeration and refuse (LimitExceeded) beyond explicit caps.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsekit/core.hpp"
#include "sparsekit/result.hpp"

namespace sparsekit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct ExhaustiveLimits {
  Index max_columns = 20;                 // spark / krank refuse wider frames
  std::uint64_t max_subsets = 2'000'000;  // per call, across all enumerated supports
};

/// max_{i<j} |<phi_i, phi_j>| / (||phi_i|| ||phi_j||). Requires m >= 2 and no
/// zero column.
double mutual_coherence(const Frame& phi);

/// sqrt((m - n) / (n (m - 1))); requires m >= n >= 1 and m >= 2.
double welch_bound(Index n, Index m);

/// Cumulative coherence mu_1(p): the largest total |cosine| between one atom
/// and p others. Requires unit-norm columns and 1 <= p <= m - 1.
double babel(const Frame& phi, Index p);

/// Size of the smallest linearly dependent column subset; m + 1 when all
/// columns are independent. Rank test: SVD, threshold 1e-10 * sigma_max.
Index spark(const Frame& phi, const ExhaustiveLimits& limits = {});

/// Largest k with every k-subset of columns independent. Uses a pivoted-QR
/// rank test, independent of the SVD route in spark().
Index krank(const Frame& phi, const ExhaustiveLimits& limits = {});

/// 1 + 1/mu; +infinity when mu = 0.
double gershgorin_spark_bound(const Frame& phi);

/// delta_k = max_{|S| <= k} ||Phi_S^T Phi_S - I||_op.
double ric(const Frame& phi, Index k, const ExhaustiveLimits& limits = {});

/// Smallest gamma with ||z_S||_1 <= gamma ||z_{S^c}||_1 for every kernel
/// vector z and |S| <= k. One LP per (support, sign pattern). Returns 0 for
/// a trivial kernel and +infinity when some kernel vector lives on k atoms.
double nsp_constant(const Frame& phi, Index k, const ExhaustiveLimits& limits = {});

/// l_p norm of everything but the k largest-magnitude entries (ties keep the
/// lower index).
double best_k_term_error(const Vector& s, Index k, double p);

struct FrameBounds {
  double lower = 0.0;  // sigma_min(Phi)^2, 0 when Phi lacks full row rank
  double upper = 0.0;  // sigma_max(Phi)^2
  bool tight = false;
  bool parseval = false;
  bool etf = false;
  bool rank_deficient = false;
};

FrameBounds frame_bounds(const Frame& phi);

struct P0Limits {
  std::uint64_t max_supports = 1'000'000;
  double exact_tol = 1e-10;  // relative to max(1, ||s||)
};

/// Exhaustive search over every support of size <= k_max. Picks an exact fit
/// of least size (lexicographically first), otherwise the least residual.
/// `converged` is the exact-fit flag.
RecoveryResult exhaustive_p0(const Frame& phi, const Signal& s, Index k_max, const P0Limits& limits = {});

struct FrameReport {
  Index rows = 0;
  Index cols = 0;
  double coherence = 0.0;
  std::optional<double> welch;
  double gershgorin_bound = 0.0;
  FrameBounds bounds;
  bool unit_norm = false;
  std::optional<Index> spark;
  std::optional<Index> krank;
  std::map<Index, double> ric;
  std::map<Index, double> nsp;
  std::vector<std::string> skipped;  // measures refused by a cap, with reason
};

struct ReportOptions {
  Index ric_max_order = 4;
  Index nsp_max_order = 3;
  ExhaustiveLimits limits;
};

FrameReport analyze_frame(const Frame& phi, const ReportOptions& options = {});

}  // namespace sparsekit
