#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "sparsekit/errors.hpp"
#include "sparsekit/matrix_io.hpp"
#include "support.hpp"

using namespace sparsekit;

TEST_CASE("svd of simple matrices") {
  CHECK(svd(Matrix::Identity(3, 3)).singular_values.isApprox(Vector::Ones(3)));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = 2;
  const Svd s = svd(d);
  CHECK(s.singular_values[0] == doctest::Approx(3.0));
  CHECK(s.singular_values[1] == doctest::Approx(2.0));
}

TEST_CASE("svd reconstructs and has orthonormal factors") {
  for (auto [n, m] : {std::pair<Index, Index>{5, 8}, {8, 5}, {50, 100}, {1, 7}}) {
    const Matrix a = test::random_frame(n, m, 11 * n + m, false);
    const Svd s = svd(a);
    const Matrix back = s.u * s.singular_values.asDiagonal() * s.v.transpose();
    CHECK((a - back).norm() <= 1e-10 * std::max(1.0, a.norm()));
    const Index r = s.singular_values.size();
    CHECK((s.u.transpose() * s.u - Matrix::Identity(r, r)).norm() <= 1e-10);
    CHECK((s.v.transpose() * s.v - Matrix::Identity(r, r)).norm() <= 1e-10);
    for (Index i = 1; i < r; ++i) CHECK(s.singular_values[i] <= s.singular_values[i - 1]);
    CHECK(s.singular_values.minCoeff() >= 0.0);
  }
}

TEST_CASE("least squares") {
  const Vector b = test::random_vector(4, 3);
  CHECK(least_squares(Matrix::Identity(4, 4), b).isApprox(b));

  Matrix row(1, 2);
  row << 1, 1;
  const Vector x = least_squares(row, Vector::Constant(1, 2.0));
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));

  const Matrix a = test::random_frame(12, 5, 4, false);
  const Vector rhs = test::random_vector(12, 5);
  const Vector r = rhs - a * least_squares(a, rhs);
  CHECK((a.transpose() * r).norm() <= 1e-9);
}

TEST_CASE("least squares has least norm among feasible points") {
  const Matrix a = test::random_frame(4, 9, 6, false);
  const Vector b = test::random_vector(4, 7);
  const Vector x0 = least_squares(a, b);
  const Svd s = svd(a);
  // kernel basis: trailing right singular vectors of the full decomposition
  Eigen::JacobiSVD<Matrix> full(a, Eigen::ComputeFullV);
  const Matrix kernel = full.matrixV().rightCols(9 - 4);
  for (int t = 0; t < 200; ++t) {
    const Vector z = kernel * test::random_vector(5, 100 + t);
    CHECK((a * (x0 + z) - b).norm() <= 1e-10);
    CHECK((x0 + z).norm() >= x0.norm() - 1e-9);
  }
  CHECK(s.singular_values.size() == 4);
}

TEST_CASE("pseudoinverse") {
  CHECK(pseudoinverse(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
  CHECK(pseudoinverse(Matrix::Constant(1, 1, 2.0))(0, 0) == doctest::Approx(0.5));

  const Matrix a = test::random_frame(4, 7, 8, false);
  const Matrix p = pseudoinverse(a);
  CHECK(test::rel_err(a * p * a, a) <= 1e-9);
  CHECK(test::rel_err(p * a * p, p) <= 1e-9);
  CHECK(test::rel_err((a * p).transpose(), a * p) <= 1e-9);
  CHECK(test::rel_err((p * a).transpose(), p * a) <= 1e-9);

  // rank deficient: duplicated column
  Matrix b = a;
  b.col(3) = b.col(1);
  const Matrix q = pseudoinverse(b);
  CHECK(test::rel_err(b * q * b, b) <= 1e-9);
  CHECK(numerical_rank(b) == 4);
  CHECK(numerical_rank(b.leftCols(4)) == 3);
  CHECK(numerical_rank(b.leftCols(3)) == 3);
}

TEST_CASE("normalize and select columns") {
  const Matrix a = test::random_frame(3, 4, 9, false);
  const Matrix u = normalize_columns(a);
  CHECK(has_unit_columns(u));
  CHECK_FALSE(has_unit_columns(a));
  Matrix z = a;
  z.col(2).setZero();
  CHECK_THROWS_AS(normalize_columns(z), InvalidArgument);
  const std::vector<Index> cols{3, 0};
  const Matrix s = select_columns(a, cols);
  CHECK(s.col(0) == a.col(3));
  CHECK(s.col(1) == a.col(0));
}

TEST_CASE("sparse code support") {
  Vector v(5);
  v << 0, 1e-13, -2, 0, 3;
  const SparseCode c(v);
  CHECK(c.support() == std::vector<Index>{1, 2, 4});
  CHECK(c.sparsity() == 3);
  const SparseCode t = SparseCode::thresholded(v, 1e-12);
  CHECK(t.support() == std::vector<Index>{2, 4});
  CHECK(t[1] == 0.0);
}

TEST_CASE("gaussian frames") {
  const RngStream rng(42, {1, 2});
  CHECK(gaussian_frame(6, 9, rng, false) == gaussian_frame(6, 9, rng, false));
  CHECK(gaussian_frame(6, 9, rng, false) != gaussian_frame(6, 9, rng.fork(0), false));

  const Frame u = gaussian_frame(10, 30, rng, true);
  for (Index j = 0; j < u.cols(); ++j) CHECK(std::abs(u.col(j).norm() - 1.0) <= 1e-12);

  const Frame g = gaussian_frame(100, 1000, RngStream(5), false);
  const double mean = g.mean();
  const double var = (g.array() - mean).square().sum() / static_cast<double>(g.size() - 1);
  CHECK(std::abs(mean) <= 0.02);
  CHECK(var >= 0.97);
  CHECK(var <= 1.03);
}

TEST_CASE("bernoulli gaussian codes") {
  CHECK(bernoulli_gaussian(50, 0.0, RngStream(1)).sparsity() == 0);
  const SparseCode c = bernoulli_gaussian(10000, 0.5, RngStream(2));
  const double frac = static_cast<double>(c.sparsity()) / 10000.0;
  CHECK(frac >= 0.48);
  CHECK(frac <= 0.52);
  const SparseCode again = bernoulli_gaussian(10000, 0.5, RngStream(2));
  CHECK(again.support() == c.support());
  CHECK(again.values() == c.values());
  CHECK_THROWS_AS(bernoulli_gaussian(10, 0.7, RngStream(2)), InvalidArgument);

  const SparseCode k = k_sparse_gaussian(40, 7, RngStream(3));
  CHECK(k.sparsity() == 7);
}

TEST_CASE("streams on distinct paths look independent") {
  // chi-square on a 10x10 contingency table of paired uniform draws
  auto a = RngStream(9, {0}).engine();
  auto b = RngStream(9, {1}).engine();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int draws = 10000;
  double table[10][10] = {};
  double ra[10] = {}, rb[10] = {};
  for (int i = 0; i < draws; ++i) {
    const int x = static_cast<int>(unif(a) * 10), y = static_cast<int>(unif(b) * 10);
    table[x][y] += 1;
    ra[x] += 1;
    rb[y] += 1;
  }
  double stat = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double e = ra[i] * rb[j] / draws;
      stat += (table[i][j] - e) * (table[i][j] - e) / e;
    }
  }
  // 0.999 quantile of chi-square with 81 degrees of freedom
  CHECK(stat < 126.08);
  CHECK(RngStream(9, {0}).key() != RngStream(9, {1}).key());
  CHECK(RngStream(9, {0, 1}).key() == RngStream(9).fork(0).fork(1).key());
}

TEST_CASE("csv parsing") {
  std::istringstream in("1,0\n0,1\n");
  CHECK(read_matrix_csv(in) == Matrix::Identity(2, 2));

  std::istringstream ragged("1,2\n3");
  try {
    read_matrix_csv(ragged);
    FAIL("ragged rows accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream junk("1,x\n");
  CHECK_THROWS_AS(read_matrix_csv(junk), ParseError);
}

TEST_CASE("csv round trip is exact") {
  const Matrix a = test::random_frame(3, 5, 77, false) * 1e-3;
  const auto path = std::filesystem::temp_directory_path() / "sparsekit_core_roundtrip.csv";
  save_matrix(a, path);
  CHECK(load_matrix(path) == a);
  std::filesystem::remove(path);
  CHECK(std::stod(format_double(0.1)) == 0.1);
}
