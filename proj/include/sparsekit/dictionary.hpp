#pragma once
// Dictionary learning by alternating sparse coding and dictionary update
// (MOD, K-SVD, R-SVD), plus the evaluation metrics used by the experiments.

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "sparsekit/core.hpp"
#include "sparsekit/result.hpp"
#include "sparsekit/rng.hpp"

namespace sparsekit {

/// Produces a code for y with at most k non-zeros over dictionary d.
using SparseCoder = std::function<RecoveryResult(const Frame& d, const Signal& y, Index k)>;

SparseCoder omp_coder();
SparseCoder exhaustive_coder();

struct CodingResult {
  Matrix x;                    // m x L
  std::vector<Index> failed;   // columns the coder could not handle (left zero)
};

CodingResult sparse_coding_step(const Frame& d, const Matrix& y, Index k, const SparseCoder& coder);

struct DictUpdate {
  Frame d;
  Matrix x;
  std::vector<Index> reseeded;  // atoms replaced because nothing used them
};

/// D = Y X^+, then unit columns with X rows rescaled inversely.
DictUpdate mod_update(const Frame& d, const Matrix& x, const Matrix& y);

/// Sequential rank-1 refit of every used atom and its coefficient row.
DictUpdate ksvd_update(const Frame& d, const Matrix& x, const Matrix& y);

/// Groups of `group_size` atoms ordered by ascending usage; each group is
/// rotated by the orthogonal Procrustes solution. X is returned unchanged.
DictUpdate rsvd_update(const Frame& d, const Matrix& x, const Matrix& y, Index group_size = 5);

/// Orthogonal R minimising ||E - R H||_F given M = E H^T.
Matrix procrustes_rotation(const Matrix& m);

/// Atom order for R-SVD: ascending popularity ||row_i(X)||_0, ties by index.
std::vector<Index> popularity_order(const Matrix& x);

enum class DictAlgorithm { Mod, Ksvd, Rsvd };

std::string_view to_string(DictAlgorithm a);
DictAlgorithm parse_dict_algorithm(std::string_view name);

struct LearnConfig {
  Index atoms = 0;      // m
  Index sparsity = 0;   // k
  int iterations = 0;   // T
  DictAlgorithm algorithm = DictAlgorithm::Ksvd;
  Index group_size = 5;
  SparseCoder coder;    // empty: OMP
  RngStream rng{0};
  std::optional<Frame> initial;  // overrides the random pick from Y

  void validate(const Matrix& y) const;
};

struct UpdateCheck {
  double before = 0.0;  // ||Y - DX||_F entering the update
  double after = 0.0;   // ... leaving it
};

struct LearnTrace {
  std::vector<double> e_snr;           // T + 1 entries; [0] is the initial coding
  std::vector<UpdateCheck> updates;    // T entries
  std::vector<double> seconds;         // wall clock per iteration
  Frame dictionary;
  Matrix codes;
  std::size_t coding_failures = 0;
};

LearnTrace learn(const Matrix& y, const LearnConfig& cfg);

constexpr double kSnrCap = 300.0;

/// 20 log10(||Y||_F / ||Y - DX||_F), capped at kSnrCap for exact fits.
double e_snr(const Matrix& y, const Frame& d, const Matrix& x);

/// Largest one-to-one matching of true atoms to learned atoms with
/// 1 - |d_i^T e_j| < eps.
Index atom_recovery_count(const Frame& d_true, const Frame& d_learned, double eps = 0.01);

/// Maximum bipartite matching on a boolean adjacency (rows x cols).
Index max_matching(const std::vector<std::vector<bool>>& adjacency);

}  // namespace sparsekit
