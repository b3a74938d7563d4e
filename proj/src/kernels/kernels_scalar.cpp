#include "wlcae/kernels.hpp"

namespace wlcae::kernels {
namespace {

// Real arithmetic is spelled out so the reference does not depend on the
// NaN-recovery path of std::complex multiplication.

Complex dot_scalar(const Complex* x, const Complex* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    const double yr = y[k].real(), yi = y[k].imag();
    re += xr * yr - xi * yi;
    im += xr * yi + xi * yr;
  }
  return {re, im};
}

Complex dot_conj_scalar(const Complex* x, const Complex* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    const double yr = y[k].real(), yi = y[k].imag();
    re += xr * yr + xi * yi;
    im += xi * yr - xr * yi;
  }
  return {re, im};
}

void axpy_scalar(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + (ar * xr - ai * xi), y[k].imag() + (ar * xi + ai * xr)};
  }
}

void axpy_conj_scalar(Complex alpha, const Complex* x, Complex* y, std::size_t n) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real(), xi = x[k].imag();
    y[k] = {y[k].real() + (ar * xr + ai * xi), y[k].imag() + (ai * xr - ar * xi)};
  }
}

constexpr KernelTable kScalarTable{
    Isa::Scalar, "scalar", dot_scalar, dot_conj_scalar, axpy_scalar, axpy_conj_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalarTable; }

}  // namespace wlcae::kernels
