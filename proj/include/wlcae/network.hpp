#pragma once

// Widely linear complex-valued feed-forward network and its CR-calculus
// backpropagation.
//
// Layer l computes z = W1 a + W2 conj(a) + b and a' = f(z). All gradients are
// conjugate gradients dJ/dp*, the steepest-descent direction for a real cost.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wlcae/complex_core.hpp"

namespace wlcae {

enum class Activation { ComplexArctan, SplitArctan, Identity };

enum class LinearMode { Strictly, Widely };

/// How the imaginary parts of the Xavier draws relate to the real parts.
enum class InitScheme {
  SharedStream,  // real and imaginary parts drawn alternately from one stream
  MirroredDraw,  // imaginary part reuses the real part's draw
};

std::string to_string(Activation a);
std::string to_string(LinearMode m);
std::string to_string(InitScheme s);
Activation parse_activation(const std::string& s);
LinearMode parse_linear_mode(const std::string& s);
InitScheme parse_init_scheme(const std::string& s);

bool is_holomorphic(Activation a) noexcept;

struct LayerParams {
  ComplexMatrix w1;
  ComplexMatrix w2;
  ComplexVector b;

  std::size_t inputs() const noexcept { return w1.cols(); }
  std::size_t outputs() const noexcept { return w1.rows(); }

  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

struct Network {
  LinearMode mode = LinearMode::Widely;
  std::vector<LayerParams> layers;
  std::vector<Activation> activations;  // one per layer

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::vector<std::size_t> dims() const;

  /// Real scalars a model of this mode trains; W2 counts only in widely mode.
  std::size_t parameter_count(bool include_bias) const;

  /// Throws ShapeError/ConfigError when the layer chain or the strict-mode W2 == 0 invariant breaks.
  void check() const;

  friend bool operator==(const Network&, const Network&) = default;
};

struct LayerTape {
  ComplexVector z;
  ComplexVector a;
};

struct ForwardTape {
  ComplexVector a0;
  std::vector<LayerTape> layers;

  const ComplexVector& output() const { return layers.empty() ? a0 : layers.back().a; }
  /// Activation input to layer l (0-based): a0 for l == 0.
  const ComplexVector& input_of(std::size_t l) const { return l == 0 ? a0 : layers[l - 1].a; }
};

struct LayerGradients {
  ComplexMatrix gw1;
  ComplexMatrix gw2;
  ComplexVector gb;
};

struct Gradients {
  std::vector<LayerGradients> layers;

  static Gradients zeros_like(const Network& net);
};

struct ActivationDerivatives {
  ComplexVector d_dz;      // da/dz
  ComplexVector d_dzstar;  // da/dz*
};

ComplexVector activation_apply(Activation kind, std::span<const Complex> z);
Complex activation_apply(Activation kind, Complex z);
ActivationDerivatives activation_derivatives(Activation kind, std::span<const Complex> z);

/// Throws DivergenceError when any z or a is non-finite, SingularityError at an arctan pole.
ForwardTape forward(const Network& net, std::span<const Complex> a0);

/// Reconstruction only, without the tape.
ComplexVector predict(const Network& net, std::span<const Complex> a0);

enum class BackwardRule {
  Auto,  // holomorphic layers use the shortcut with da/dz* == 0
  Full,  // always apply the four-term widely linear recursion
};

/// Conjugate gradients of J for one sample given the seeds (dJ/da^L, dJ/da^L*).
Gradients backward(const Network& net, const ForwardTape& tape, std::span<const Complex> seed_d_a,
                   std::span<const Complex> seed_d_astar, BackwardRule rule = BackwardRule::Auto);

/// Adds `scale` times the sample gradients into `acc` (batch averaging).
void backward_accumulate(const Network& net, const ForwardTape& tape,
                         std::span<const Complex> seed_d_a, std::span<const Complex> seed_d_astar,
                         double scale, Gradients& acc, BackwardRule rule = BackwardRule::Auto);

/// p <- p - lr * g for every parameter. W2 stays zero in strictly linear mode.
Network sgd_update(const Network& net, const Gradients& grads, double lr);
void sgd_update_in_place(Network& net, const Gradients& grads, double lr);

/// Real and imaginary weight parts ~ U(-r, r), r = sqrt(6 / (n_in + n_out)); zero biases.
Network init_xavier(std::span<const std::size_t> dims, LinearMode mode, Activation activation,
                    std::uint64_t seed, InitScheme scheme = InitScheme::SharedStream);

}  // namespace wlcae
