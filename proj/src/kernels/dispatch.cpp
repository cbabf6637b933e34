#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sparsekit/kernels.hpp"

namespace sparsekit::kernels {
namespace {

constexpr KernelTable kScalarTable{&scalar::dot, &scalar::axpy, &scalar::squared_norm,
                                   &scalar::gemv_t};
#if defined(SPARSEKIT_HAVE_AVX2)
constexpr KernelTable kAvx2Table{&avx2::dot, &avx2::axpy, &avx2::squared_norm, &avx2::gemv_t};
#endif
#if defined(SPARSEKIT_HAVE_NEON)
constexpr KernelTable kNeonTable{&neon::dot, &neon::axpy, &neon::squared_norm, &neon::gemv_t};
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(SPARSEKIT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(SPARSEKIT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect() {
  if (const char* env = std::getenv("SPARSEKIT_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && cpu_supports(Isa::Avx2)) return Isa::Avx2;
    if (want == "neon" && cpu_supports(Isa::Neon)) return Isa::Neon;
  }
  if (cpu_supports(Isa::Avx2)) return Isa::Avx2;
  if (cpu_supports(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{&table_for(detect())};
  return table;
}

std::atomic<Isa>& current_isa() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) { return cpu_supports(isa); }

const KernelTable& table_for(Isa isa) {
  if (!cpu_supports(isa)) throw std::invalid_argument("ISA not available: " + std::string(isa_name(isa)));
  switch (isa) {
#if defined(SPARSEKIT_HAVE_AVX2)
    case Isa::Avx2:
      return kAvx2Table;
#endif
#if defined(SPARSEKIT_HAVE_NEON)
    case Isa::Neon:
      return kNeonTable;
#endif
    default:
      return kScalarTable;
  }
}

Isa active_isa() { return current_isa().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  current().store(&table_for(isa), std::memory_order_relaxed);
  current_isa().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> x, std::span<const double> y) {
  return current().load(std::memory_order_relaxed)->dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  current().load(std::memory_order_relaxed)->axpy(a, x.data(), y.data(), x.size());
}

double squared_norm(std::span<const double> x) {
  return current().load(std::memory_order_relaxed)->squared_norm(x.data(), x.size());
}

void gemv_t(std::span<const double> a, std::size_t rows, std::span<const double> x,
            std::span<double> out) {
  current().load(std::memory_order_relaxed)->gemv_t(a.data(), rows, out.size(), x.data(), out.data());
}

}  // namespace sparsekit::kernels
