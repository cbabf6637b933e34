#include <doctest.h>

#include <vector>

#include "sparsekit/kernels.hpp"
#include "support.hpp"

using namespace sparsekit;
namespace k = sparsekit::kernels;

namespace {

std::vector<k::Isa> vector_isas() {
  std::vector<k::Isa> out;
  for (k::Isa isa : {k::Isa::Avx2, k::Isa::Neon}) {
    if (k::isa_available(isa)) out.push_back(isa);
  }
  return out;
}

std::vector<double> draw(std::size_t n, std::uint64_t seed) {
  if (n == 0) return {};
  const Vector v = test::random_vector(static_cast<Index>(n), seed);
  return {v.data(), v.data() + v.size()};
}

}  // namespace

TEST_CASE("scalar kernels match Eigen") {
  for (std::size_t n : {0u, 1u, 3u, 17u, 64u}) {
    const auto x = draw(n, 1 + n), y = draw(n, 100 + n);
    const Eigen::Map<const Vector> ex(x.data(), n), ey(y.data(), n);
    CHECK(k::scalar::dot(x.data(), y.data(), n) == doctest::Approx(ex.dot(ey)).epsilon(1e-14));
    CHECK(k::scalar::squared_norm(x.data(), n) == doctest::Approx(ex.squaredNorm()).epsilon(1e-14));
  }
}

TEST_CASE("vector variants agree with the scalar reference") {
  const auto isas = vector_isas();
  if (isas.empty()) MESSAGE("no vector ISA on this machine; only the scalar path is exercised");
  for (k::Isa isa : isas) {
    CAPTURE(k::isa_name(isa));
    const auto& t = k::table_for(isa);
    // every tail length around the 4- and 8-wide unrolls
    for (std::size_t n = 0; n <= 37; ++n) {
      const auto x = draw(n, 7 * n + 1), y = draw(n, 7 * n + 2);
      const double ref = k::scalar::dot(x.data(), y.data(), n);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) scale += std::abs(x[i] * y[i]);
      CHECK(std::abs(t.dot(x.data(), y.data(), n) - ref) <= 1e-14 * (1.0 + scale));
      CHECK(t.squared_norm(x.data(), n) ==
            doctest::Approx(k::scalar::squared_norm(x.data(), n)).epsilon(1e-14));

      auto ya = y, yb = y;
      k::scalar::axpy(-0.75, x.data(), ya.data(), n);
      t.axpy(-0.75, x.data(), yb.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(yb[i] == doctest::Approx(ya[i]).epsilon(1e-15));
    }
    for (std::size_t rows : {1u, 5u, 8u, 50u}) {
      const std::size_t cols = 13;
      const auto a = draw(rows * cols, rows), x = draw(rows, rows + 99);
      std::vector<double> ref(cols), got(cols);
      k::scalar::gemv_t(a.data(), rows, cols, x.data(), ref.data());
      t.gemv_t(a.data(), rows, cols, x.data(), got.data());
      for (std::size_t j = 0; j < cols; ++j) CHECK(got[j] == doctest::Approx(ref[j]).epsilon(1e-13));
    }
  }
}

TEST_CASE("dispatch can be forced to scalar and back") {
  const k::Isa before = k::active_isa();
  k::set_active_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  const auto x = draw(9, 3);
  CHECK(k::dot(x, x) == k::scalar::dot(x.data(), x.data(), 9));
  k::set_active_isa(before);
  CHECK(k::active_isa() == before);
}

TEST_CASE("unavailable ISA is refused") {
  for (k::Isa isa : {k::Isa::Avx2, k::Isa::Neon}) {
    if (!k::isa_available(isa)) CHECK_THROWS(k::set_active_isa(isa));
  }
}

TEST_CASE("gemv_t entry point checks shapes") {
  std::vector<double> a(6, 1.0), x(3, 1.0), out(2);
  k::gemv_t(a, 3, x, out);
  CHECK(out[0] == 3.0);
  CHECK(out[1] == 3.0);
}
