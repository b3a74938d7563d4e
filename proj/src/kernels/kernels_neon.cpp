#include "wlcae/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace wlcae::kernels {

#if defined(__aarch64__)
namespace {

// One float64x2_t holds a single complex number: [re, im].

inline float64x2_t load1(const Complex* p) { return vld1q_f64(reinterpret_cast<const double*>(p)); }
inline void store1(Complex* p, float64x2_t v) { vst1q_f64(reinterpret_cast<double*>(p), v); }
inline float64x2_t swap(float64x2_t v) { return vextq_f64(v, v, 1); }

void partial_products(const Complex* x, const Complex* y, std::size_t n,
                      double& rr, double& ii, double& ri, double& ir) {
  float64x2_t s0 = vdupq_n_f64(0.0), s1 = vdupq_n_f64(0.0);
  float64x2_t c0 = vdupq_n_f64(0.0), c1 = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t x0 = load1(x + k), x1 = load1(x + k + 1);
    const float64x2_t y0 = load1(y + k), y1 = load1(y + k + 1);
    s0 = vfmaq_f64(s0, x0, y0);
    s1 = vfmaq_f64(s1, x1, y1);
    c0 = vfmaq_f64(c0, x0, swap(y0));
    c1 = vfmaq_f64(c1, x1, swap(y1));
  }
  for (; k < n; ++k) {
    const float64x2_t x0 = load1(x + k), y0 = load1(y + k);
    s0 = vfmaq_f64(s0, x0, y0);
    c0 = vfmaq_f64(c0, x0, swap(y0));
  }
  const float64x2_t s = vaddq_f64(s0, s1);
  const float64x2_t c = vaddq_f64(c0, c1);
  rr = vgetq_lane_f64(s, 0);
  ii = vgetq_lane_f64(s, 1);
  ri = vgetq_lane_f64(c, 0);
  ir = vgetq_lane_f64(c, 1);
}

Complex dot_neon(const Complex* x, const Complex* y, std::size_t n) {
  double rr, ii, ri, ir;
  partial_products(x, y, n, rr, ii, ri, ir);
  return {rr - ii, ri + ir};
}

Complex dot_conj_neon(const Complex* x, const Complex* y, std::size_t n) {
  double rr, ii, ri, ir;
  partial_products(x, y, n, rr, ii, ri, ir);
  return {rr + ii, ir - ri};
}

void axpy_neon(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  // alpha * x = ar * [xr, xi] + ai * [-xi, xr]
  const float64x2_t ar = vdupq_n_f64(alpha.real());
  const float64x2_t ai = {-alpha.imag(), alpha.imag()};
  for (std::size_t k = 0; k < n; ++k) {
    const float64x2_t xv = load1(x + k);
    float64x2_t acc = vfmaq_f64(load1(y + k), xv, ar);
    acc = vfmaq_f64(acc, swap(xv), ai);
    store1(y + k, acc);
  }
}

void axpy_conj_neon(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  // alpha * conj(x) = ar * [xr, -xi] + ai * [xi, xr]
  const float64x2_t ar = {alpha.real(), -alpha.real()};
  const float64x2_t ai = vdupq_n_f64(alpha.imag());
  for (std::size_t k = 0; k < n; ++k) {
    const float64x2_t xv = load1(x + k);
    float64x2_t acc = vfmaq_f64(load1(y + k), xv, ar);
    acc = vfmaq_f64(acc, swap(xv), ai);
    store1(y + k, acc);
  }
}

constexpr KernelTable kNeonTable{
    Isa::Neon, "neon", dot_neon, dot_conj_neon, axpy_neon, axpy_conj_neon,
};

}  // namespace

const KernelTable* neon_table() noexcept { return &kNeonTable; }

#else

const KernelTable* neon_table() noexcept { return nullptr; }

#endif

}  // namespace wlcae::kernels
