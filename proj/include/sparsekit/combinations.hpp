#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "sparsekit/core.hpp"

namespace sparsekit {

/// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (Index i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

/// Calls fn(subset) for every k-subset of {0..n-1} in lexicographic order;
/// stops early when fn returns false. Returns false if stopped early.
template <class Fn>
bool for_each_combination(Index n, Index k, Fn&& fn) {
  if (k < 0 || k > n) return true;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (;;) {
    if (!fn(static_cast<const std::vector<Index>&>(idx))) return false;
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace sparsekit
