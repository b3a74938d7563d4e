#pragma once

// Reconstruction costs with their CR-calculus seed gradients.
//
// Every cost is the mean over the N output neurons of a per-neuron term. The
// seeds are the pair (dJ/da, dJ/da*) consumed by backprop; because each cost
// is real-valued, dJ/da* == conj(dJ/da).

#include <span>
#include <string>
#include <variant>

#include "wlcae/complex_core.hpp"

namespace wlcae {

struct Mse {};

struct NormalizedMse {
  double beta = 0.1;
};

struct PhaseAmplitude {
  double alpha = 1.0;
  double beta = 0.1;
};

using CostKind = std::variant<Mse, NormalizedMse, PhaseAmplitude>;

struct CostResult {
  double value = 0.0;
  ComplexVector d_a;
  ComplexVector d_astar;
};

/// Throws ConfigError unless beta > 0 and alpha >= 0 (both finite).
void validate(const CostKind& kind);

std::string cost_name(const CostKind& kind);

/// (1/N) sum |a - x|^2
CostResult mse(std::span<const Complex> a, std::span<const Complex> x);

/// (1/N) sum |a - x|^2 / max(|x|^2, beta)
CostResult normalized_mse(std::span<const Complex> a, std::span<const Complex> x, double beta);

/// (1/N) sum [(|a| - |x|)^2 + alpha (2|a||x| - x a* - x* a)] / max(|x|^2, beta)
///
/// At a == 0 the |x|/|a| factor is taken as zero (|a| <= 1e-12).
CostResult phase_amplitude(std::span<const Complex> a, std::span<const Complex> x, double alpha,
                           double beta);

CostResult evaluate(const CostKind& kind, std::span<const Complex> a, std::span<const Complex> x);

/// Value only; skips gradient allocation.
double cost_value(const CostKind& kind, std::span<const Complex> a, std::span<const Complex> x);

struct MseFactors {
  double amplitude = 0.0;  // (|y| - |x|)^2
  double phase = 0.0;      // |y||x| (2 - 2 cos(arg y - arg x))
};

/// Splits |y - x|^2 into its amplitude and phase parts.
MseFactors factorize_mse(Complex y, Complex x);

/// |y||x| - Re(x conj(y)) evaluated without cancellation; always >= 0.
double phase_gap(Complex y, Complex x);

}  // namespace wlcae
