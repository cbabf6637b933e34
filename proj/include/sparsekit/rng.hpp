#pragma once
// Deterministic, splittable random streams.
//
// A stream is identified by (master seed, path). The engine seed is a
// SplitMix64-style hash of the seed and every path element, so forked streams
// are reproducible without sharing a sequence across tasks. Draws come from
// std::mt19937_64; Gaussian variates use std::normal_distribution. Output is
// reproducible within one build; it is not promised bit-exact across
// standard-library implementations.

#include <cstdint>
#include <random>
#include <vector>

#include "sparsekit/core.hpp"

namespace sparsekit {

using Engine = std::mt19937_64;

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::vector<std::uint64_t> path = {});

  /// Child stream with `index` appended to the path.
  RngStream fork(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<std::uint64_t>& path() const noexcept { return path_; }

  /// Hash of (seed, path); the engine seed.
  std::uint64_t key() const noexcept;

  /// Fresh engine positioned at the start of this stream.
  Engine engine() const { return Engine(key()); }

 private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// n x m matrix of i.i.d. N(0,1) entries, drawn column by column. With
/// unit_columns, each column is scaled to unit l2 norm (a zero column is
/// redrawn).
Frame gaussian_frame(Index n, Index m, const RngStream& rng, bool unit_columns);

/// alpha_i = theta_i * omega_i, theta ~ Bernoulli(rho), omega ~ N(0,1).
SparseCode bernoulli_gaussian(Index m, double rho, const RngStream& rng);

/// Exactly k non-zeros: uniform random support, N(0,1) values.
SparseCode k_sparse_gaussian(Index m, Index k, const RngStream& rng);

}  // namespace sparsekit
