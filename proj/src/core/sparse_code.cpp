#include <algorithm>
#include <cmath>

#include "sparsekit/core.hpp"
#include "sparsekit/result.hpp"

namespace sparsekit {

SparseCode::SparseCode(Vector values) : values_(std::move(values)) {
  for (Index i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.0) support_.push_back(i);
  }
}

SparseCode SparseCode::thresholded(const Vector& values, double threshold) {
  Vector v = values;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) <= threshold) v[i] = 0.0;
  }
  return SparseCode(std::move(v));
}

bool RecoveryResult::has_warning(const std::string& w) const {
  return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

double residual_norm(const Frame& phi, const Vector& x, const Signal& s) { return (phi * x - s).norm(); }

}  // namespace sparsekit
