#include "wlcae/losses.hpp"

#include <algorithm>
#include <cmath>

#include "wlcae/errors.hpp"

namespace wlcae {
namespace {

constexpr double kOriginGuard = 1e-12;

void require_pair(std::span<const Complex> a, std::span<const Complex> x) {
  if (a.size() != x.size()) {
    throw ShapeError("cost operands differ in length: " + std::to_string(a.size()) + " vs " +
                     std::to_string(x.size()));
  }
  if (a.empty()) throw ShapeError("cost over zero neurons");
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ConfigError("beta must be a positive finite number, got " + std::to_string(beta));
  }
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("alpha must be a non-negative finite number, got " + std::to_string(alpha));
  }
}

// Ties at |x|^2 == beta take the floor branch.
double floor_denominator(Complex x, double beta) {
  const double power = std::norm(x);
  return power > beta ? power : beta;
}

CostResult with_seeds(std::size_t n) {
  CostResult r;
  r.d_a.resize(n);
  r.d_astar.resize(n);
  return r;
}

}  // namespace

void validate(const CostKind& kind) {
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, NormalizedMse>) {
          require_beta(k.beta);
        } else if constexpr (std::is_same_v<T, PhaseAmplitude>) {
          require_alpha(k.alpha);
          require_beta(k.beta);
        }
      },
      kind);
}

std::string cost_name(const CostKind& kind) {
  switch (kind.index()) {
    case 0: return "mse";
    case 1: return "normalized-mse";
    default: return "phase-amplitude";
  }
}

double phase_gap(Complex y, Complex x) {
  // |x||y| - Re(p) with p = x conj(y). For Re(p) > 0 use |p|^2 - Re(p)^2 = Im(p)^2.
  const Complex p = x * std::conj(y);
  const double m = std::abs(x) * std::abs(y);
  const double re = p.real();
  if (re > 0.0) return p.imag() * p.imag() / (m + re);
  return m - re;
}

MseFactors factorize_mse(Complex y, Complex x) {
  const double d = std::abs(y) - std::abs(x);
  return {d * d, 2.0 * phase_gap(y, x)};
}

CostResult mse(std::span<const Complex> a, std::span<const Complex> x) {
  require_pair(a, x);
  const std::size_t n = a.size();
  const double dn = static_cast<double>(n);
  CostResult r = with_seeds(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex e = a[i] - x[i];
    sum += std::norm(e);
    r.d_astar[i] = e / dn;
    r.d_a[i] = std::conj(r.d_astar[i]);
  }
  r.value = sum / dn;
  return r;
}

CostResult normalized_mse(std::span<const Complex> a, std::span<const Complex> x, double beta) {
  require_pair(a, x);
  require_beta(beta);
  const std::size_t n = a.size();
  const double dn = static_cast<double>(n);
  CostResult r = with_seeds(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double denom = floor_denominator(x[i], beta);
    const Complex e = a[i] - x[i];
    sum += std::norm(e) / denom;
    r.d_astar[i] = e / (denom * dn);
    r.d_a[i] = std::conj(r.d_astar[i]);
  }
  r.value = sum / dn;
  return r;
}

CostResult phase_amplitude(std::span<const Complex> a, std::span<const Complex> x, double alpha,
                           double beta) {
  require_pair(a, x);
  require_alpha(alpha);
  require_beta(beta);
  const std::size_t n = a.size();
  const double dn = static_cast<double>(n);
  CostResult r = with_seeds(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex y = a[i];
    const double denom = floor_denominator(x[i], beta);
    const double ay = std::abs(y), ax = std::abs(x[i]);
    const double amp = (ay - ax) * (ay - ax);
    sum += (amp + alpha * 2.0 * phase_gap(y, x[i])) / denom;

    // dJ/dy* = [(1 - (1 - alpha)|x|/|y|) y - alpha x] / denom
    const double ratio = ay > kOriginGuard ? ax / ay : 0.0;
    const double coef = 1.0 - ratio * (1.0 - alpha);
    r.d_astar[i] = (coef * y - alpha * x[i]) / (denom * dn);
    r.d_a[i] = std::conj(r.d_astar[i]);
  }
  r.value = sum / dn;
  return r;
}

CostResult evaluate(const CostKind& kind, std::span<const Complex> a, std::span<const Complex> x) {
  return std::visit(
      [&](const auto& k) -> CostResult {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Mse>) {
          return mse(a, x);
        } else if constexpr (std::is_same_v<T, NormalizedMse>) {
          return normalized_mse(a, x, k.beta);
        } else {
          return phase_amplitude(a, x, k.alpha, k.beta);
        }
      },
      kind);
}

double cost_value(const CostKind& kind, std::span<const Complex> a, std::span<const Complex> x) {
  require_pair(a, x);
  validate(kind);
  const double dn = static_cast<double>(a.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    switch (kind.index()) {
      case 0: sum += std::norm(a[i] - x[i]); break;
      case 1: sum += std::norm(a[i] - x[i]) / floor_denominator(x[i], std::get<1>(kind).beta); break;
      default: {
        const auto& k = std::get<2>(kind);
        const double d = std::abs(a[i]) - std::abs(x[i]);
        sum += (d * d + k.alpha * 2.0 * phase_gap(a[i], x[i])) / floor_denominator(x[i], k.beta);
      }
    }
  }
  return sum / dn;
}

}  // namespace wlcae
