// NEON variants for AArch64, where Advanced SIMD is part of the base ISA.
#include <arm_neon.h>

#include "sparsekit/kernels.hpp"

namespace sparsekit::kernels::neon {

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

double squared_norm(const double* x, std::size_t n) { return dot(x, x, n); }

void gemv_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* out) {
  for (std::size_t j = 0; j < cols; ++j) out[j] = dot(a + j * rows, x, rows);
}

}  // namespace sparsekit::kernels::neon
