#pragma once
// Dense linear-algebra contract shared by every solver.
//
// A Frame is an n x m column-major matrix whose columns are the atoms; a
// Signal is a length-n vector; a SparseCode is a length-m coefficient vector
// carrying its support explicitly.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace sparsekit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using Frame = Matrix;
using Signal = Vector;

/// Coefficient vector with its sorted support {i : values[i] != 0}.
class SparseCode {
 public:
  SparseCode() = default;
  explicit SparseCode(Vector values);

  /// Zeroes every entry with |v_i| <= threshold, then builds the support.
  static SparseCode thresholded(const Vector& values, double threshold);

  const Vector& values() const noexcept { return values_; }
  const std::vector<Index>& support() const noexcept { return support_; }
  Index size() const noexcept { return values_.size(); }
  Index sparsity() const noexcept { return static_cast<Index>(support_.size()); }
  double operator[](Index i) const { return values_[i]; }

 private:
  Vector values_;
  std::vector<Index> support_;
};

struct Svd {
  Matrix u;               // n x r, orthonormal columns
  Vector singular_values; // length r = min(n, m), non-increasing
  Matrix v;               // m x r, orthonormal columns
};

/// Thin SVD A = U diag(sigma) V^T. Throws NumericalError if the Jacobi sweep
/// does not converge.
Svd svd(const Matrix& a);

/// Moore-Penrose pseudoinverse. Singular values at or below
/// max(n, m) * eps * sigma_max are treated as zero.
Matrix pseudoinverse(const Matrix& a);

/// Minimum-norm least-squares solution A^+ b.
Vector least_squares(const Matrix& a, const Vector& b);

/// Numerical rank with singular-value threshold rel_tol * sigma_max.
Index numerical_rank(const Matrix& a, double rel_tol = 1e-10);

bool all_finite(const Matrix& a);

/// True when every column has l2 norm within tol of 1.
bool has_unit_columns(const Matrix& a, double tol = 1e-12);

/// Divides every column by its l2 norm; throws InvalidArgument on a zero column.
Matrix normalize_columns(Matrix a);

/// Columns of `a` listed in `cols`, in order.
Matrix select_columns(const Matrix& a, std::span<const Index> cols);

inline std::span<const double> column_span(const Matrix& a, Index j) {
  return {a.data() + j * a.rows(), static_cast<std::size_t>(a.rows())};
}

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

inline std::span<double> as_span(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace sparsekit
