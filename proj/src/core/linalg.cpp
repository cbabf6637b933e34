#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsekit/core.hpp"
#include "sparsekit/errors.hpp"

namespace sparsekit {
namespace {

double pinv_cutoff(const Matrix& a, double sigma_max) {
  return static_cast<double>(std::max(a.rows(), a.cols())) * std::numeric_limits<double>::epsilon() *
         sigma_max;
}

}  // namespace

Svd svd(const Matrix& a) {
  if (a.size() == 0) throw InvalidArgument("svd: empty matrix");
  if (!all_finite(a)) throw InvalidArgument("svd: non-finite entry");
  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) throw NumericalError("svd: Jacobi iteration did not converge");
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

Matrix pseudoinverse(const Matrix& a) {
  if (a.size() == 0) throw InvalidArgument("pseudoinverse: empty matrix");
  const Svd d = svd(a);
  const double cutoff = pinv_cutoff(a, d.singular_values.size() ? d.singular_values[0] : 0.0);
  Vector inv(d.singular_values.size());
  for (Index i = 0; i < inv.size(); ++i) {
    const double s = d.singular_values[i];
    inv[i] = s > cutoff ? 1.0 / s : 0.0;
  }
  return d.v * inv.asDiagonal() * d.u.transpose();
}

Vector least_squares(const Matrix& a, const Vector& b) {
  if (a.size() == 0) throw InvalidArgument("least_squares: empty matrix");
  if (b.size() != a.rows()) throw InvalidArgument("least_squares: dimension mismatch");
  const Svd d = svd(a);
  const double cutoff = pinv_cutoff(a, d.singular_values[0]);
  Vector coeffs = d.u.transpose() * b;
  for (Index i = 0; i < coeffs.size(); ++i) {
    const double s = d.singular_values[i];
    coeffs[i] = s > cutoff ? coeffs[i] / s : 0.0;
  }
  return d.v * coeffs;
}

Index numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  const Vector s = a.jacobiSvd().singularValues();
  if (s[0] <= 0.0) return 0;
  const double cutoff = rel_tol * s[0];
  return static_cast<Index>(std::count_if(s.begin(), s.end(), [&](double v) { return v > cutoff; }));
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

bool has_unit_columns(const Matrix& a, double tol) {
  for (Index j = 0; j < a.cols(); ++j) {
    if (std::abs(a.col(j).norm() - 1.0) > tol) return false;
  }
  return true;
}

Matrix normalize_columns(Matrix a) {
  for (Index j = 0; j < a.cols(); ++j) {
    const double nrm = a.col(j).norm();
    if (nrm == 0.0) throw InvalidArgument("normalize_columns: zero column " + std::to_string(j));
    a.col(j) /= nrm;
  }
  return a;
}

Matrix select_columns(const Matrix& a, std::span<const Index> cols) {
  Matrix out(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = a.col(cols[k]);
  return out;
}

}  // namespace sparsekit
