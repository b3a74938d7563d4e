#pragma once

// Central-difference oracle for R- and R*-derivatives (Wirtinger derivatives).
//
// For f(z) with z = x + jy:
//   df/dz  = (df/dx - j df/dy) / 2
//   df/dz* = (df/dx + j df/dy) / 2
// Used to verify every analytic gradient in the library.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wlcae/complex_core.hpp"
#include "wlcae/losses.hpp"
#include "wlcae/network.hpp"

namespace wlcae {

using RealFunction = std::function<double(std::span<const Complex>)>;
using ComplexFunction = std::function<Complex(Complex)>;

inline constexpr double kDefaultStep = 1e-6;

struct CRGradient {
  ComplexVector d_z;
  ComplexVector d_zstar;
};

ComplexVector numeric_r_derivative(const RealFunction& f, std::span<const Complex> z,
                                   double h = kDefaultStep);
ComplexVector numeric_rstar_derivative(const RealFunction& f, std::span<const Complex> z,
                                       double h = kDefaultStep);
CRGradient numeric_cr_gradient(const RealFunction& f, std::span<const Complex> z,
                               double h = kDefaultStep);

/// Wirtinger derivatives of a complex-valued scalar map; dg/dz* ~ 0 iff g is holomorphic at z.
Complex numeric_r_derivative_of_map(const ComplexFunction& g, Complex z, double h = kDefaultStep);
Complex numeric_rstar_derivative_of_map(const ComplexFunction& g, Complex z, double h = kDefaultStep);

struct TensorCheck {
  std::string name;            // e.g. "layer1.W2"
  // max_k |numeric_k - analytic_k| divided by the tensor's largest component magnitude
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t worst_index = 0;
  std::string worst_part;  // "re" or "im"
  std::size_t checked = 0;
  std::size_t skipped = 0;
};

struct GradCheckReport {
  std::vector<TensorCheck> tensors;
  double tolerance = 0.0;
  bool passed = true;
  std::string skip_reason;  // set when coordinates were skipped near a non-smooth point

  double max_rel_error() const;
  std::string to_text() const;
};

struct GradCheckOptions {
  double step = kDefaultStep;
  /// Perturbations within kink_margin_factor * step of a non-smooth point are skipped.
  double kink_margin_factor = 10.0;
  BackwardRule rule = BackwardRule::Auto;
};

/// Batch cost J = mean over samples of cost(forward(x), x).
double batch_cost(const Network& net, std::span<const ComplexVector> batch, const CostKind& cost);

/// Analytic conjugate gradients of batch_cost (mean of per-sample gradients).
Gradients batch_gradients(const Network& net, std::span<const ComplexVector> batch,
                          const CostKind& cost, BackwardRule rule = BackwardRule::Auto);

/// Compares analytic conjugate gradients against central differences on every
/// real and imaginary component of every W1, W2 and b. With g = dJ/dp*,
/// dJ/dRe(p) = 2 Re(g) and dJ/dIm(p) = 2 Im(g).
GradCheckReport check_network_gradients(const Network& net, std::span<const ComplexVector> batch,
                                        const CostKind& cost, double tol,
                                        const GradCheckOptions& options = {});

}  // namespace wlcae
