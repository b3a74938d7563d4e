#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "test_util.hpp"
#include "wlcae/errors.hpp"
#include "wlcae/kernels.hpp"

namespace wlcae {
namespace {

std::vector<const kernels::KernelTable*> simd_tables() {
  std::vector<const kernels::KernelTable*> out;
  if (const auto* t = kernels::avx2_table()) out.push_back(t);
  if (const auto* t = kernels::neon_table()) out.push_back(t);
  return out;
}

// Lengths cover empty, every SIMD remainder and long vectors.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 63, 392, 1001};

TEST(Kernels, ScalarMatchesPlainLoops) {
  std::mt19937_64 gen(11);
  const auto& s = kernels::scalar_table();
  for (const std::size_t n : kLengths) {
    const ComplexVector x = testing::random_vector(gen, n), y = testing::random_vector(gen, n);
    Complex dot{}, dotc{};
    for (std::size_t k = 0; k < n; ++k) {
      dot += x[k] * y[k];
      dotc += x[k] * std::conj(y[k]);
    }
    EXPECT_LE(std::abs(s.dot(x.data(), y.data(), n) - dot), 1e-13);
    EXPECT_LE(std::abs(s.dot_conj(x.data(), y.data(), n) - dotc), 1e-13);

    const Complex alpha{0.3, -1.7};
    ComplexVector a = y, b = y, ref_a = y, ref_b = y;
    s.axpy(alpha, x.data(), a.data(), n);
    s.axpy_conj(alpha, x.data(), b.data(), n);
    for (std::size_t k = 0; k < n; ++k) {
      ref_a[k] += alpha * x[k];
      ref_b[k] += alpha * std::conj(x[k]);
    }
    EXPECT_LE(testing::max_abs_diff(a, ref_a), 1e-15);
    EXPECT_LE(testing::max_abs_diff(b, ref_b), 1e-15);
  }
}

TEST(Kernels, SimdVariantsMatchScalar) {
  const auto tables = simd_tables();
  if (tables.empty()) GTEST_SKIP() << "no SIMD variant available on this CPU";
  std::mt19937_64 gen(12);
  const auto& s = kernels::scalar_table();
  for (const auto* t : tables) {
    for (const std::size_t n : kLengths) {
      const ComplexVector x = testing::random_vector(gen, n), y = testing::random_vector(gen, n);
      const double tol = 1e-14 * static_cast<double>(n + 1);
      EXPECT_LE(std::abs(t->dot(x.data(), y.data(), n) - s.dot(x.data(), y.data(), n)), tol)
          << t->name << " n=" << n;
      EXPECT_LE(std::abs(t->dot_conj(x.data(), y.data(), n) - s.dot_conj(x.data(), y.data(), n)), tol)
          << t->name << " n=" << n;
      const Complex alpha{-0.8, 0.45};
      ComplexVector a = y, b = y, ra = y, rb = y;
      t->axpy(alpha, x.data(), a.data(), n);
      s.axpy(alpha, x.data(), ra.data(), n);
      t->axpy_conj(alpha, x.data(), b.data(), n);
      s.axpy_conj(alpha, x.data(), rb.data(), n);
      EXPECT_LE(testing::max_abs_diff(a, ra), 1e-15) << t->name << " n=" << n;
      EXPECT_LE(testing::max_abs_diff(b, rb), 1e-15) << t->name << " n=" << n;
    }
  }
}

TEST(Kernels, SimdAxpyLeavesTailUntouched) {
  const auto tables = simd_tables();
  if (tables.empty()) GTEST_SKIP() << "no SIMD variant available on this CPU";
  for (const auto* t : tables) {
    ComplexVector x(5, {1, 1}), y(8, {7, 7});
    t->axpy({1, 0}, x.data(), y.data(), 5);
    for (std::size_t k = 5; k < 8; ++k) EXPECT_EQ(y[k], Complex(7, 7));
  }
}

TEST(Kernels, ActiveTableIsStableAndNamed) {
  const auto& a = kernels::active();
  EXPECT_EQ(&a, &kernels::active());
  EXPECT_EQ(a.name, kernels::isa_name(a.isa));
}

TEST(Kernels, SpanFrontEndsCheckLengths) {
  ComplexVector a(3), b(4);
  EXPECT_THROW(kernels::dot(a, b), ShapeError);
  EXPECT_THROW(kernels::axpy_conj({1, 0}, a, b), ShapeError);
}

}  // namespace
}  // namespace wlcae
