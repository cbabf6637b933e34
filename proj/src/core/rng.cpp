#include <algorithm>
#include <numeric>

#include "sparsekit/errors.hpp"
#include "sparsekit/rng.hpp"

namespace sparsekit {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::vector<std::uint64_t> path)
    : seed_(seed), path_(std::move(path)) {}

RngStream RngStream::fork(std::uint64_t index) const {
  std::vector<std::uint64_t> child = path_;
  child.push_back(index);
  return RngStream(seed_, std::move(child));
}

std::uint64_t RngStream::key() const noexcept {
  std::uint64_t h = mix64(seed_);
  std::uint64_t depth = 0;
  for (std::uint64_t p : path_) {
    ++depth;
    h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL * depth));
  }
  return h;
}

Frame gaussian_frame(Index n, Index m, const RngStream& rng, bool unit_columns) {
  if (n < 1 || m < 1) throw InvalidArgument("gaussian_frame: n and m must be positive");
  Engine eng = rng.engine();
  std::normal_distribution<double> normal(0.0, 1.0);
  Frame f(n, m);
  for (Index j = 0; j < m; ++j) {
    for (;;) {
      for (Index i = 0; i < n; ++i) f(i, j) = normal(eng);
      if (!unit_columns) break;
      const double nrm = f.col(j).norm();
      if (nrm > 0.0) {
        f.col(j) /= nrm;
        break;
      }
    }
  }
  return f;
}

SparseCode bernoulli_gaussian(Index m, double rho, const RngStream& rng) {
  if (!(rho >= 0.0 && rho <= 0.5)) throw InvalidArgument("bernoulli_gaussian: rho must lie in [0, 0.5]");
  if (m < 0) throw InvalidArgument("bernoulli_gaussian: negative length");
  Engine eng = rng.engine();
  std::bernoulli_distribution coin(rho);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(m);
  for (Index i = 0; i < m; ++i) {
    const bool on = coin(eng);
    const double w = normal(eng);
    v[i] = on ? w : 0.0;
  }
  return SparseCode(std::move(v));
}

SparseCode k_sparse_gaussian(Index m, Index k, const RngStream& rng) {
  if (k < 0 || k > m) throw InvalidArgument("k_sparse_gaussian: need 0 <= k <= m");
  Engine eng = rng.engine();
  std::vector<Index> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), Index{0});
  // Partial Fisher-Yates: the first k slots become the support.
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, m - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(eng))]);
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v = Vector::Zero(m);
  for (Index i = 0; i < k; ++i) {
    double w = 0.0;
    while (w == 0.0) w = normal(eng);
    v[idx[static_cast<std::size_t>(i)]] = w;
  }
  return SparseCode(std::move(v));
}

}  // namespace sparsekit
