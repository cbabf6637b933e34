#include <cmath>
#include <functional>

#include "sparsekit/dictionary.hpp"
#include "sparsekit/errors.hpp"

namespace sparsekit {

// Kuhn's augmenting paths; sizes here are a few hundred at most.
Index max_matching(const std::vector<std::vector<bool>>& adjacency) {
  const std::size_t rows = adjacency.size();
  const std::size_t cols = rows ? adjacency.front().size() : 0;
  std::vector<long> owner(cols, -1);
  std::vector<char> seen(cols);

  std::function<bool(std::size_t)> augment = [&](std::size_t r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!adjacency[r][c] || seen[c]) continue;
      seen[c] = 1;
      if (owner[c] < 0 || augment(static_cast<std::size_t>(owner[c]))) {
        owner[c] = static_cast<long>(r);
        return true;
      }
    }
    return false;
  };

  Index matched = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (adjacency[r].size() != cols) throw InvalidArgument("max_matching: ragged adjacency");
    std::fill(seen.begin(), seen.end(), 0);
    if (augment(r)) ++matched;
  }
  return matched;
}

Index atom_recovery_count(const Frame& d_true, const Frame& d_learned, double eps) {
  if (d_true.rows() != d_learned.rows()) throw InvalidArgument("atom_recovery_count: atom lengths differ");
  const Matrix cosines = (d_true.transpose() * d_learned).cwiseAbs();
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(d_true.cols()),
                                     std::vector<bool>(static_cast<std::size_t>(d_learned.cols())));
  for (Index i = 0; i < cosines.rows(); ++i) {
    for (Index j = 0; j < cosines.cols(); ++j) {
      adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1.0 - cosines(i, j) < eps;
    }
  }
  return max_matching(adj);
}

}  // namespace sparsekit
