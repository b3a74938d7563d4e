#include "wlcae/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define WLCAE_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#else
#define WLCAE_HAVE_AVX2_KERNELS 0
#endif

namespace wlcae::kernels {

#if WLCAE_HAVE_AVX2_KERNELS
namespace {

// Functions carry target attributes instead of the whole TU being built with
// -mavx2, so no AVX2 code can leak into inline functions shared with other TUs.
#define WLCAE_AVX2 __attribute__((target("avx2,fma")))

// One __m256d holds two interleaved complex numbers: [r0, i0, r1, i1].

WLCAE_AVX2 inline __m256d load2(const Complex* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}

WLCAE_AVX2 inline void store2(Complex* p, __m256d v) {
  _mm256_storeu_pd(reinterpret_cast<double*>(p), v);
}

// (a0 + a2, a1 + a3) as a 128-bit pair.
WLCAE_AVX2 inline __m128d fold(__m256d v) {
  return _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
}

// Accumulates straight = sum [xr*yr, xi*yi] and crossed = sum [xr*yi, xi*yr].
WLCAE_AVX2 void partial_products(const Complex* x, const Complex* y, std::size_t n,
                                 double& rr, double& ii, double& ri, double& ir) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  __m256d c0 = _mm256_setzero_pd(), c1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x0 = load2(x + k), x1 = load2(x + k + 2);
    const __m256d y0 = load2(y + k), y1 = load2(y + k + 2);
    s0 = _mm256_fmadd_pd(x0, y0, s0);
    s1 = _mm256_fmadd_pd(x1, y1, s1);
    c0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), c0);
    c1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0b0101), c1);
  }
  for (; k + 2 <= n; k += 2) {
    const __m256d x0 = load2(x + k), y0 = load2(y + k);
    s0 = _mm256_fmadd_pd(x0, y0, s0);
    c0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), c0);
  }
  alignas(16) double s[2], c[2];
  _mm_store_pd(s, fold(_mm256_add_pd(s0, s1)));
  _mm_store_pd(c, fold(_mm256_add_pd(c0, c1)));
  rr = s[0];
  ii = s[1];
  ri = c[0];
  ir = c[1];
  for (; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    const double yr = y[k].real(), yi = y[k].imag();
    rr += xr * yr;
    ii += xi * yi;
    ri += xr * yi;
    ir += xi * yr;
  }
}

WLCAE_AVX2 Complex dot_avx2(const Complex* x, const Complex* y, std::size_t n) {
  double rr, ii, ri, ir;
  partial_products(x, y, n, rr, ii, ri, ir);
  return {rr - ii, ri + ir};
}

WLCAE_AVX2 Complex dot_conj_avx2(const Complex* x, const Complex* y, std::size_t n) {
  double rr, ii, ri, ir;
  partial_products(x, y, n, rr, ii, ri, ir);
  return {rr + ii, ir - ri};
}

// alpha * x for two packed complex values: fmaddsub(x, ar, swap(x) * ai).
WLCAE_AVX2 inline __m256d cmul_scalar(__m256d x, __m256d ar, __m256d ai) {
  return _mm256_fmaddsub_pd(x, ar, _mm256_mul_pd(_mm256_permute_pd(x, 0b0101), ai));
}

WLCAE_AVX2 void axpy_avx2(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    store2(y + k, _mm256_add_pd(load2(y + k), cmul_scalar(load2(x + k), ar, ai)));
  }
  for (; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + (alpha.real() * xr - alpha.imag() * xi),
            y[k].imag() + (alpha.real() * xi + alpha.imag() * xr)};
  }
}

WLCAE_AVX2 void axpy_conj_avx2(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const __m256d odd_sign = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d xc = _mm256_xor_pd(load2(x + k), odd_sign);
    store2(y + k, _mm256_add_pd(load2(y + k), cmul_scalar(xc, ar, ai)));
  }
  for (; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + (alpha.real() * xr + alpha.imag() * xi),
            y[k].imag() + (alpha.imag() * xr - alpha.real() * xi)};
  }
}

#undef WLCAE_AVX2

constexpr KernelTable kAvx2Table{
    Isa::Avx2, "avx2", dot_avx2, dot_conj_avx2, axpy_avx2, axpy_conj_avx2,
};

}  // namespace

const KernelTable* avx2_table() noexcept {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2Table : nullptr;
}

#else

const KernelTable* avx2_table() noexcept { return nullptr; }

#endif

}  // namespace wlcae::kernels
