#include "wlcae/network.hpp"

#include <cmath>
#include <random>

#include "wlcae/errors.hpp"
#include "wlcae/kernels.hpp"
#include "wlcae/rng.hpp"

namespace wlcae {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::ComplexArctan: return "complex-arctan";
    case Activation::SplitArctan: return "split-arctan";
    case Activation::Identity: return "identity";
  }
  return "unknown";
}

std::string to_string(LinearMode m) { return m == LinearMode::Strictly ? "strictly" : "widely"; }

std::string to_string(InitScheme s) {
  return s == InitScheme::SharedStream ? "shared-stream" : "mirrored-draw";
}

Activation parse_activation(const std::string& s) {
  if (s == "complex-arctan") return Activation::ComplexArctan;
  if (s == "split-arctan") return Activation::SplitArctan;
  if (s == "identity") return Activation::Identity;
  throw ConfigError("unknown activation '" + s + "' (complex-arctan|split-arctan|identity)");
}

LinearMode parse_linear_mode(const std::string& s) {
  if (s == "strictly") return LinearMode::Strictly;
  if (s == "widely") return LinearMode::Widely;
  throw ConfigError("unknown mode '" + s + "' (strictly|widely)");
}

InitScheme parse_init_scheme(const std::string& s) {
  if (s == "shared-stream") return InitScheme::SharedStream;
  if (s == "mirrored-draw") return InitScheme::MirroredDraw;
  throw ConfigError("unknown init scheme '" + s + "' (shared-stream|mirrored-draw)");
}

bool is_holomorphic(Activation a) noexcept { return a != Activation::SplitArctan; }

std::size_t Network::input_dim() const { return layers.empty() ? 0 : layers.front().inputs(); }

std::size_t Network::output_dim() const { return layers.empty() ? 0 : layers.back().outputs(); }

std::vector<std::size_t> Network::dims() const {
  std::vector<std::size_t> d;
  if (layers.empty()) return d;
  d.push_back(input_dim());
  for (const auto& l : layers) d.push_back(l.outputs());
  return d;
}

std::size_t Network::parameter_count(bool include_bias) const {
  std::size_t n = 0;
  for (const auto& l : layers) {
    const std::size_t weights = 2 * l.w1.size();
    n += mode == LinearMode::Widely ? 2 * weights : weights;
    if (include_bias) n += 2 * l.b.size();
  }
  return n;
}

void Network::check() const {
  if (layers.empty()) throw ConfigError("network has no layers");
  if (activations.size() != layers.size()) {
    throw ShapeError("network has " + std::to_string(layers.size()) + " layers but " +
                     std::to_string(activations.size()) + " activations");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& p = layers[l];
    if (!p.w1.same_shape(p.w2)) throw ShapeError("layer " + std::to_string(l) + ": W1/W2 shapes differ");
    if (p.b.size() != p.w1.rows()) throw ShapeError("layer " + std::to_string(l) + ": bias length mismatch");
    if (l > 0 && p.inputs() != layers[l - 1].outputs()) {
      throw ShapeError("layer " + std::to_string(l) + " input width does not chain");
    }
    if (mode == LinearMode::Strictly && !p.w2.is_zero()) {
      throw ConfigError("layer " + std::to_string(l) + ": strictly linear layer with nonzero W2");
    }
  }
}

Gradients Gradients::zeros_like(const Network& net) {
  Gradients g;
  g.layers.reserve(net.layers.size());
  for (const auto& p : net.layers) {
    g.layers.push_back({ComplexMatrix(p.outputs(), p.inputs()),
                        ComplexMatrix(p.outputs(), p.inputs()), ComplexVector(p.outputs())});
  }
  return g;
}

// --- activations -----------------------------------------------------------

namespace {

void require_off_pole(Complex z) {
  if (z.real() == 0.0 && std::abs(z.imag()) == 1.0) {
    throw SingularityError("complex arctan evaluated at its pole z = " +
                           std::string(z.imag() > 0 ? "+j" : "-j"));
  }
}

}  // namespace

Complex activation_apply(Activation kind, Complex z) {
  switch (kind) {
    case Activation::ComplexArctan:
      require_off_pole(z);
      return std::atan(z);
    case Activation::SplitArctan:
      return {std::atan(z.real()), std::atan(z.imag())};
    case Activation::Identity:
      return z;
  }
  return z;
}

ComplexVector activation_apply(Activation kind, std::span<const Complex> z) {
  ComplexVector a(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) a[i] = activation_apply(kind, z[i]);
  return a;
}

ActivationDerivatives activation_derivatives(Activation kind, std::span<const Complex> z) {
  ActivationDerivatives d{ComplexVector(z.size()), ComplexVector(z.size())};
  for (std::size_t i = 0; i < z.size(); ++i) {
    switch (kind) {
      case Activation::ComplexArctan:
        require_off_pole(z[i]);
        d.d_dz[i] = 1.0 / (1.0 + z[i] * z[i]);
        break;
      case Activation::SplitArctan: {
        const double gx = 1.0 / (1.0 + z[i].real() * z[i].real());
        const double gy = 1.0 / (1.0 + z[i].imag() * z[i].imag());
        d.d_dz[i] = 0.5 * (gx + gy);
        d.d_dzstar[i] = 0.5 * (gx - gy);
        break;
      }
      case Activation::Identity:
        d.d_dz[i] = 1.0;
        break;
    }
  }
  return d;
}

// --- forward ---------------------------------------------------------------

namespace {

void linear_into(const LayerParams& p, LinearMode mode, std::span<const Complex> a, ComplexVector& z) {
  const auto& k = kernels::active();
  const std::size_t n = a.size();
  z.resize(p.outputs());
  for (std::size_t i = 0; i < p.outputs(); ++i) {
    Complex acc = k.dot(p.w1.row(i).data(), a.data(), n);
    if (mode == LinearMode::Widely) acc += k.dot_conj(p.w2.row(i).data(), a.data(), n);
    z[i] = acc + p.b[i];
  }
}

void require_finite(std::span<const Complex> v, std::size_t layer, const char* what) {
  if (!all_finite(v)) {
    throw DivergenceError(std::string("non-finite ") + what + " in layer " + std::to_string(layer + 1));
  }
}

}  // namespace

ForwardTape forward(const Network& net, std::span<const Complex> a0) {
  if (net.layers.empty()) throw ConfigError("network has no layers");
  if (a0.size() != net.input_dim()) {
    throw ShapeError("input has " + std::to_string(a0.size()) + " entries, network expects " +
                     std::to_string(net.input_dim()));
  }
  ForwardTape tape;
  tape.a0.assign(a0.begin(), a0.end());
  tape.layers.resize(net.layers.size());
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    LayerTape& t = tape.layers[l];
    linear_into(net.layers[l], net.mode, tape.input_of(l), t.z);
    require_finite(t.z, l, "pre-activation");
    t.a = activation_apply(net.activations[l], t.z);
    require_finite(t.a, l, "activation");
  }
  return tape;
}

ComplexVector predict(const Network& net, std::span<const Complex> a0) {
  return forward(net, a0).output();
}

// --- backward --------------------------------------------------------------

void backward_accumulate(const Network& net, const ForwardTape& tape,
                         std::span<const Complex> seed_d_a, std::span<const Complex> seed_d_astar,
                         double scale, Gradients& acc, BackwardRule rule) {
  const std::size_t L = net.layers.size();
  if (tape.layers.size() != L || tape.a0.size() != net.input_dim()) {
    throw ShapeError("tape does not match network");
  }
  if (acc.layers.size() != L) throw ShapeError("gradient accumulator does not match network");
  if (seed_d_a.size() != net.output_dim() || seed_d_astar.size() != net.output_dim()) {
    throw ShapeError("backprop seeds do not match network output width");
  }
  const auto& k = kernels::active();
  const bool widely = net.mode == LinearMode::Widely;

  ComplexVector d_a(seed_d_a.begin(), seed_d_a.end());
  ComplexVector d_astar(seed_d_astar.begin(), seed_d_astar.end());
  ComplexVector d_z, d_zstar;

  for (std::size_t l = L; l-- > 0;) {
    const LayerParams& p = net.layers[l];
    const LayerTape& t = tape.layers[l];
    if (t.z.size() != p.outputs()) throw ShapeError("tape does not match network");
    const std::size_t rows = p.outputs(), cols = p.inputs();

    const ActivationDerivatives f = activation_derivatives(net.activations[l], t.z);
    d_z.resize(rows);
    d_zstar.resize(rows);
    if (rule == BackwardRule::Auto && is_holomorphic(net.activations[l])) {
      for (std::size_t i = 0; i < rows; ++i) {
        d_z[i] = d_a[i] * f.d_dz[i];
        d_zstar[i] = d_astar[i] * std::conj(f.d_dz[i]);
      }
    } else {
      for (std::size_t i = 0; i < rows; ++i) {
        d_z[i] = d_a[i] * f.d_dz[i] + d_astar[i] * std::conj(f.d_dzstar[i]);
        d_zstar[i] = d_a[i] * f.d_dzstar[i] + d_astar[i] * std::conj(f.d_dz[i]);
      }
    }

    // dJ/dW1*[i,k] = dJ/dz_i* conj(a_k), dJ/dW2*[i,k] = dJ/dz_i* a_k, dJ/db* = dJ/dz*
    const ComplexVector& a_prev = tape.input_of(l);
    LayerGradients& g = acc.layers[l];
    for (std::size_t i = 0; i < rows; ++i) {
      const Complex s = scale * d_zstar[i];
      k.axpy_conj(s, a_prev.data(), g.gw1.row(i).data(), cols);
      if (widely) k.axpy(s, a_prev.data(), g.gw2.row(i).data(), cols);
      g.gb[i] += s;
    }

    if (l == 0) break;
    // dJ/da = sum_i dJ/dz_i W1[i,:] + dJ/dz_i* conj(W2[i,:])
    // dJ/da* = sum_i dJ/dz_i W2[i,:] + dJ/dz_i* conj(W1[i,:])
    d_a.assign(cols, Complex{});
    d_astar.assign(cols, Complex{});
    for (std::size_t i = 0; i < rows; ++i) {
      k.axpy(d_z[i], p.w1.row(i).data(), d_a.data(), cols);
      k.axpy_conj(d_zstar[i], p.w1.row(i).data(), d_astar.data(), cols);
      if (widely) {
        k.axpy_conj(d_zstar[i], p.w2.row(i).data(), d_a.data(), cols);
        k.axpy(d_z[i], p.w2.row(i).data(), d_astar.data(), cols);
      }
    }
  }
}

Gradients backward(const Network& net, const ForwardTape& tape, std::span<const Complex> seed_d_a,
                   std::span<const Complex> seed_d_astar, BackwardRule rule) {
  Gradients g = Gradients::zeros_like(net);
  backward_accumulate(net, tape, seed_d_a, seed_d_astar, 1.0, g, rule);
  return g;
}

// --- update / init ---------------------------------------------------------

void sgd_update_in_place(Network& net, const Gradients& grads, double lr) {
  if (grads.layers.size() != net.layers.size()) throw ShapeError("gradients do not match network");
  const auto& k = kernels::active();
  const Complex step = -lr;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    LayerParams& p = net.layers[l];
    const LayerGradients& g = grads.layers[l];
    if (!g.gw1.same_shape(p.w1) || !g.gw2.same_shape(p.w2) || g.gb.size() != p.b.size()) {
      throw ShapeError("gradients do not match layer " + std::to_string(l));
    }
    k.axpy(step, g.gw1.data().data(), p.w1.data().data(), p.w1.size());
    if (net.mode == LinearMode::Widely) {
      k.axpy(step, g.gw2.data().data(), p.w2.data().data(), p.w2.size());
    }
    k.axpy(step, g.gb.data(), p.b.data(), p.b.size());
  }
}

Network sgd_update(const Network& net, const Gradients& grads, double lr) {
  Network next = net;
  sgd_update_in_place(next, grads, lr);
  return next;
}

Network init_xavier(std::span<const std::size_t> dims, LinearMode mode, Activation activation,
                    std::uint64_t seed, InitScheme scheme) {
  if (dims.size() < 2) throw ConfigError("network needs at least an input and an output width");
  for (const std::size_t d : dims) {
    if (d == 0) throw ConfigError("layer widths must be positive");
  }
  std::mt19937_64 gen = substream(seed, "init");
  Network net;
  net.mode = mode;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t n_in = dims[l], n_out = dims[l + 1];
    const double r = std::sqrt(6.0 / static_cast<double>(n_in + n_out));
    std::uniform_real_distribution<double> u(-r, r);
    auto fill = [&](ComplexMatrix& m) {
      for (Complex& c : m.data()) {
        const double re = u(gen);
        const double im = scheme == InitScheme::SharedStream ? u(gen) : re;
        c = {re, im};
      }
    };
    LayerParams p{ComplexMatrix(n_out, n_in), ComplexMatrix(n_out, n_in), ComplexVector(n_out)};
    fill(p.w1);
    if (mode == LinearMode::Widely) fill(p.w2);
    net.layers.push_back(std::move(p));
    net.activations.push_back(activation);
  }
  return net;
}

}  // namespace wlcae
