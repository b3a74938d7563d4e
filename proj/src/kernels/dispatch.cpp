#include <cstdlib>
#include <cstdio>
#include <string>

#include "wlcae/errors.hpp"
#include "wlcae/kernels.hpp"

namespace wlcae::kernels {
namespace {

const KernelTable& resolve() noexcept {
  if (const char* env = std::getenv("WLCAE_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return scalar_table();
    if (want == "avx2" && avx2_table()) return *avx2_table();
    if (want == "neon" && neon_table()) return *neon_table();
    std::fprintf(stderr, "wlcae: WLCAE_KERNELS=%s unavailable, auto-selecting\n", env);
  }
  if (const KernelTable* t = avx2_table()) return *t;
  if (const KernelTable* t = neon_table()) return *t;
  return scalar_table();
}

void require_same(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ShapeError("kernel operand lengths differ: " + std::to_string(a) + " vs " +
                     std::to_string(b));
  }
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = resolve();
  return table;
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  require_same(x.size(), y.size());
  return active().dot(x.data(), y.data(), x.size());
}

Complex dot_conj(std::span<const Complex> x, std::span<const Complex> y) {
  require_same(x.size(), y.size());
  return active().dot_conj(x.data(), y.data(), x.size());
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  require_same(x.size(), y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void axpy_conj(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  require_same(x.size(), y.size());
  active().axpy_conj(alpha, x.data(), y.data(), x.size());
}

}  // namespace wlcae::kernels
