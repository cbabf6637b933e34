#pragma once
// Dense double-precision inner-loop kernels.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, a vectorized variant (AVX2+FMA on x86-64, NEON on AArch64).
// The variant is chosen once at startup from the CPU feature bits; the
// environment variable SPARSEKIT_ISA=scalar forces the reference path.
// Vector variants reassociate sums, so results agree with the scalar path
// to rounding, not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace sparsekit::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// ISA used by the dispatched entry points below.
Isa active_isa();

/// True when `isa` is compiled in and supported by this CPU.
bool isa_available(Isa isa);

/// Overrides the dispatch target; throws if `isa` is unavailable.
void set_active_isa(Isa isa);

// ---------------------------------------------------------------------------
// Dispatched entry points
// ---------------------------------------------------------------------------

double dot(std::span<const double> x, std::span<const double> y);

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

double squared_norm(std::span<const double> x);

/// out[j] = <column j of A, x>, A column-major with `rows` rows.
void gemv_t(std::span<const double> a, std::size_t rows, std::span<const double> x,
            std::span<double> out);

// ---------------------------------------------------------------------------
// Per-ISA tables (exposed for equivalence tests)
// ---------------------------------------------------------------------------

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*squared_norm)(const double*, std::size_t);
  void (*gemv_t)(const double*, std::size_t, std::size_t, const double*, double*);
};

const KernelTable& table_for(Isa isa);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double squared_norm(const double* x, std::size_t n);
void gemv_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* out);
}  // namespace scalar

namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double squared_norm(const double* x, std::size_t n);
void gemv_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* out);
}  // namespace avx2

namespace neon {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double squared_norm(const double* x, std::size_t n);
void gemv_t(const double* a, std::size_t rows, std::size_t cols, const double* x, double* out);
}  // namespace neon

}  // namespace sparsekit::kernels
