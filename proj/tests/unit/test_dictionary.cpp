#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sparsekit/dictionary.hpp"
#include "sparsekit/errors.hpp"
#include "sparsekit/experiments.hpp"
#include "support.hpp"

using namespace sparsekit;

namespace {

// Y = D X with k-sparse columns; X rows all used.
struct Planted {
  Frame d;
  Matrix x;
  Matrix y;
};

Planted planted(Index n, Index m, Index k, Index l, std::uint64_t seed) {
  Planted p;
  p.d = test::random_frame(n, m, seed);
  p.x = Matrix::Zero(m, l);
  for (Index j = 0; j < l; ++j) p.x.col(j) = k_sparse_gaussian(m, k, RngStream(seed, {1, static_cast<std::uint64_t>(j)})).values();
  p.y = p.d * p.x;
  return p;
}

Matrix codes(const Frame& d, const Matrix& y, Index k) { return sparse_coding_step(d, y, k, omp_coder()).x; }

bool supports_shrink(const Matrix& before, const Matrix& after) {
  return ((before.array() == 0.0) <= (after.array() == 0.0)).all();
}

}  // namespace

TEST_CASE("sparse coding of single atoms") {
  const Frame d = test::random_frame(6, 10, 1);
  Matrix y(6, 3);
  y << d.col(4), -2.0 * d.col(0), 0.5 * d.col(9);
  const CodingResult c = sparse_coding_step(d, y, 2, omp_coder());
  CHECK(c.failed.empty());
  CHECK(c.x(4, 0) == doctest::Approx(1.0));
  CHECK(c.x(0, 1) == doctest::Approx(-2.0));
  CHECK(c.x(9, 2) == doctest::Approx(0.5));
  CHECK((c.x.array() != 0.0).count() == 3);

  const Matrix yi = test::random_frame(5, 7, 2, false);
  CHECK((codes(Matrix::Identity(5, 5), yi, 5) - yi).norm() <= 1e-12);
}

TEST_CASE("exhaustive coder is optimal per column") {
  const Planted p = planted(6, 10, 2, 20, 3);
  const Matrix noisy = p.y + 0.05 * test::random_frame(6, 20, 4, false);
  const Matrix x = sparse_coding_step(p.d, noisy, 2, exhaustive_coder()).x;
  CHECK((noisy - p.d * x).norm() <= (noisy - p.d * p.x).norm() + 1e-12);
  for (Index j = 0; j < 20; ++j) CHECK((x.col(j).array() != 0.0).count() <= 2);
}

TEST_CASE("coder failures leave flagged zero columns") {
  const Frame d = test::random_frame(4, 6, 5);
  Matrix y = test::random_frame(4, 3, 6, false);
  y(0, 1) = std::nan("");
  const CodingResult c = sparse_coding_step(d, y, 2, omp_coder());
  CHECK(c.failed == std::vector<Index>{1});
  CHECK(c.x.col(1).isZero());
}

TEST_CASE("mod update") {
  const Frame d = test::random_frame(5, 8, 7);
  const Matrix x = test::random_frame(8, 8, 8, false);
  const Matrix y = test::random_frame(5, 8, 9, false);
  const DictUpdate u = mod_update(d, x, y);
  CHECK((y - u.d * u.x).norm() <= 1e-8);
  CHECK(has_unit_columns(u.d, 1e-12));

  const Planted p = planted(8, 16, 3, 60, 10);
  const Matrix noisy = p.y + 0.1 * test::random_frame(8, 60, 11, false);
  const Frame d0 = test::random_frame(8, 16, 12);
  const Matrix x0 = codes(d0, noisy, 3);
  const DictUpdate m = mod_update(d0, x0, noisy);
  const Matrix raw = noisy * pseudoinverse(x0) * x0;
  CHECK((m.d * m.x - raw).norm() <= 1e-10 * raw.norm());
  if (m.reseeded.empty()) CHECK((noisy - m.d * m.x).norm() <= (noisy - d0 * x0).norm() + 1e-10);
}

TEST_CASE("k-svd update") {
  Vector atom = test::random_vector(6, 13);
  atom.normalize();
  const Matrix xr = test::random_frame(1, 9, 14, false);
  const Matrix y = atom * xr;
  const DictUpdate u = ksvd_update(test::random_frame(6, 1, 15), xr, y);
  CHECK(std::abs(std::abs(u.d.col(0).dot(atom)) - 1.0) <= 1e-12);
  CHECK((y - u.d * u.x).norm() <= 1e-10 * y.norm());

  for (int t = 0; t < 5; ++t) {
    const Planted p = planted(10, 20, 3, 80, 20 + t);
    const Frame d0 = test::random_frame(10, 20, 40 + t);
    const Matrix x0 = codes(d0, p.y, 3);
    const DictUpdate k = ksvd_update(d0, x0, p.y);
    CHECK(has_unit_columns(k.d, 1e-10));
    if (k.reseeded.empty()) {
      CHECK((p.y - k.d * k.x).norm() <= (p.y - d0 * x0).norm() + 1e-10);
      CHECK(supports_shrink(x0, k.x));
    }
  }
}

TEST_CASE("unused atoms are reseeded") {
  const Planted p = planted(6, 8, 2, 30, 50);
  Matrix x = codes(p.d, p.y, 2);
  x.row(3).setZero();
  for (auto* update : {&mod_update, &ksvd_update}) {
    const DictUpdate u = update(p.d, x, p.y);
    CHECK(std::find(u.reseeded.begin(), u.reseeded.end(), Index{3}) != u.reseeded.end());
    CHECK(has_unit_columns(u.d, 1e-10));
  }
}

TEST_CASE("procrustes rotation") {
  for (int t = 0; t < 10; ++t) {
    const Matrix r = procrustes_rotation(test::random_frame(5, 5, 60 + t, false));
    CHECK((r.transpose() * r - Matrix::Identity(5, 5)).norm() <= 1e-10);
  }
  const Matrix h = test::random_frame(4, 4, 70, false);
  CHECK((procrustes_rotation(h * h.transpose()) - Matrix::Identity(4, 4)).norm() <= 1e-8);

  // R maps H onto E when E is an exact rotation of H
  const Matrix q = svd(test::random_frame(4, 4, 71, false)).u;
  const Matrix hh = test::random_frame(4, 12, 72, false);
  const Matrix e = q * hh;
  CHECK((procrustes_rotation(e * hh.transpose()) - q).norm() <= 1e-8);
}

TEST_CASE("popularity order") {
  Matrix x = Matrix::Zero(4, 5);
  x.row(0).setOnes();
  x(1, 0) = 1;
  x(3, 0) = 1;
  x(3, 1) = 1;
  CHECK(popularity_order(x) == std::vector<Index>{2, 1, 3, 0});
}

TEST_CASE("r-svd update") {
  for (int t = 0; t < 5; ++t) {
    const Planted p = planted(10, 20, 3, 80, 80 + t);
    const Frame d0 = test::random_frame(10, 20, 90 + t);
    const Matrix x0 = codes(d0, p.y, 3);
    const DictUpdate r = rsvd_update(d0, x0, p.y, 5);
    CHECK(has_unit_columns(r.d, 1e-10));
    if (r.reseeded.empty()) {
      CHECK(r.x == x0);
      CHECK((p.y - r.d * r.x).norm() <= (p.y - d0 * x0).norm() + 1e-10);
    }
  }
  const Planted p = planted(6, 7, 2, 20, 99);
  const Matrix x = codes(p.d, p.y, 2);
  CHECK_THROWS_AS(rsvd_update(p.d, x, p.y, 0), InvalidArgument);
  // group size beyond m is one group
  CHECK(has_unit_columns(rsvd_update(p.d, x, p.y, 50).d, 1e-10));
}

TEST_CASE("e_snr") {
  const Matrix y = test::random_frame(4, 6, 100, false);
  const Frame d = Matrix::Identity(4, 4);
  CHECK(e_snr(y, d, Matrix::Zero(4, 6)) == doctest::Approx(0.0));
  CHECK(e_snr(y, d, 0.9 * y) == doctest::Approx(20.0));
  CHECK(e_snr(y, d, y) == kSnrCap);
}

TEST_CASE("atom matching") {
  const Frame d = test::random_frame(8, 12, 101);
  CHECK(atom_recovery_count(d, d) == 12);
  Frame flipped(8, 12);
  for (Index j = 0; j < 12; ++j) flipped.col(j) = -d.col((j + 5) % 12);
  CHECK(atom_recovery_count(d, flipped) == 12);
  Frame one_off = d;
  one_off.col(4) = test::random_frame(8, 1, 102).col(0);
  CHECK(atom_recovery_count(d, one_off) == 11);

  // greedy would take (0,0) and strand row 1
  std::vector<std::vector<bool>> adj{{true, true}, {true, false}};
  CHECK(max_matching(adj) == 2);
}

TEST_CASE("learning loop") {
  const Planted p = planted(12, 20, 3, 300, 110);
  LearnConfig cfg;
  cfg.atoms = 20;
  cfg.sparsity = 3;
  cfg.rng = RngStream(5);

  cfg.iterations = 0;
  const LearnTrace zero = learn(p.y, cfg);
  CHECK(zero.e_snr.size() == 1);
  CHECK(zero.updates.empty());
  CHECK(has_unit_columns(zero.dictionary, 1e-12));
  for (Index j = 0; j < 20; ++j) {
    bool from_y = false;
    for (Index l = 0; l < 300 && !from_y; ++l) from_y = (zero.dictionary.col(j) - p.y.col(l).normalized()).norm() <= 1e-12;
    CHECK(from_y);
  }
  CHECK(zero.e_snr[0] == doctest::Approx(e_snr(p.y, zero.dictionary, zero.codes)));

  for (DictAlgorithm a : {DictAlgorithm::Ksvd, DictAlgorithm::Rsvd, DictAlgorithm::Mod}) {
    cfg.iterations = 30;
    cfg.algorithm = a;
    const LearnTrace tr = learn(p.y, cfg);
    CAPTURE(to_string(a));
    REQUIRE(tr.e_snr.size() == 31);
    int rising = 0;
    for (std::size_t i = 1; i < tr.e_snr.size(); ++i) rising += tr.e_snr[i] >= tr.e_snr[i - 1];
    CHECK(rising >= static_cast<int>(0.95 * 30));
    for (const auto& u : tr.updates) CHECK(u.after <= u.before * (1.0 + kMonotoneTol) + 1e-12);
    CHECK(learn(p.y, cfg).e_snr == tr.e_snr);
  }
}

TEST_CASE("learn config checks") {
  LearnConfig cfg;
  cfg.atoms = 50;
  cfg.sparsity = 2;
  cfg.iterations = 1;
  CHECK_THROWS_AS(learn(test::random_frame(5, 20, 1, false), cfg), InvalidArgument);
  CHECK(parse_dict_algorithm("rsvd") == DictAlgorithm::Rsvd);
  CHECK_THROWS_AS(parse_dict_algorithm("svd"), InvalidArgument);
}
