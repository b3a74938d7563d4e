#pragma once

// Complex inner-loop kernels shared by the linear transforms and backprop.
//
// Every kernel has a scalar reference implementation. SIMD variants (AVX2+FMA
// on x86-64, NEON on AArch64) are selected once at runtime from CPU features.
// The choice can be pinned with WLCAE_KERNELS=scalar|avx2|neon.
//
// All arrays are interleaved (re, im) doubles, i.e. the std::complex<double>
// layout. SIMD variants reassociate sums, so results agree with the scalar
// reference to rounding, not bitwise.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace wlcae::kernels {

using Complex = std::complex<double>;

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  std::string_view name;
  // sum_k x[k] * y[k]
  Complex (*dot)(const Complex* x, const Complex* y, std::size_t n);
  // sum_k x[k] * conj(y[k])
  Complex (*dot_conj)(const Complex* x, const Complex* y, std::size_t n);
  // y[k] += alpha * x[k]
  void (*axpy)(Complex alpha, const Complex* x, Complex* y, std::size_t n);
  // y[k] += alpha * conj(x[k])
  void (*axpy_conj)(Complex alpha, const Complex* x, Complex* y, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the variant is not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

/// The table used by the library. Resolved on first call and fixed afterwards.
const KernelTable& active() noexcept;

std::string_view isa_name(Isa isa) noexcept;

// Checked span front-ends over the active table.
Complex dot(std::span<const Complex> x, std::span<const Complex> y);
Complex dot_conj(std::span<const Complex> x, std::span<const Complex> y);
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
void axpy_conj(Complex alpha, std::span<const Complex> x, std::span<Complex> y);

}  // namespace wlcae::kernels
