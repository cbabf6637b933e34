#pragma once

#include <cmath>

#include "sparsekit/core.hpp"
#include "sparsekit/rng.hpp"

namespace sparsekit::test {

inline Frame random_frame(Index n, Index m, std::uint64_t seed, bool unit = true) {
  return gaussian_frame(n, m, RngStream(seed, {0xF}), unit);
}

inline Vector random_vector(Index n, std::uint64_t seed) {
  return gaussian_frame(n, 1, RngStream(seed, {0xE}), false).col(0);
}

inline double rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace sparsekit::test
