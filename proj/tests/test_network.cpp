#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"
#include "wlcae/errors.hpp"
#include "wlcae/gradcheck.hpp"
#include "wlcae/losses.hpp"
#include "wlcae/network.hpp"

namespace wlcae {
namespace {

using testing::random_matrix;
using testing::random_vector;

Network single_layer(ComplexMatrix w1, ComplexMatrix w2, ComplexVector b, Activation act,
                     LinearMode mode = LinearMode::Widely) {
  Network net;
  net.mode = mode;
  net.layers.push_back({std::move(w1), std::move(w2), std::move(b)});
  net.activations.push_back(act);
  return net;
}

TEST(Forward, IdentityAndConjugationLayers) {
  const ComplexVector a0{{1, 2}, {-0.5, 0.25}};
  const Network id = single_layer(ComplexMatrix::identity(2), ComplexMatrix(2, 2), ComplexVector(2),
                                  Activation::Identity);
  EXPECT_EQ(forward(id, a0).output(), a0);
  const Network cj = single_layer(ComplexMatrix(2, 2), ComplexMatrix::identity(2), ComplexVector(2),
                                  Activation::Identity);
  EXPECT_EQ(forward(cj, a0).output(), conj(a0));
}

TEST(Forward, MatchesScalarReimplementation) {
  std::mt19937_64 gen(41);
  const std::size_t n_in = 4, n_out = 3;
  const Network net = single_layer(random_matrix(gen, n_out, n_in), random_matrix(gen, n_out, n_in),
                                   random_vector(gen, n_out), Activation::ComplexArctan);
  const ComplexVector a0{{0.3, 0.1}, {-0.2, 0.4}, {0.05, -0.6}, {0.7, 0.0}};
  const ComplexVector out = forward(net, a0).output();
  const LayerParams& p = net.layers[0];
  for (std::size_t i = 0; i < n_out; ++i) {
    double re = p.b[i].real(), im = p.b[i].imag();
    for (std::size_t k = 0; k < n_in; ++k) {
      const double ar = a0[k].real(), ai = a0[k].imag();
      const double w1r = p.w1(i, k).real(), w1i = p.w1(i, k).imag();
      const double w2r = p.w2(i, k).real(), w2i = p.w2(i, k).imag();
      re += w1r * ar - w1i * ai + w2r * ar + w2i * ai;
      im += w1r * ai + w1i * ar - w2r * ai + w2i * ar;
    }
    // arctan z = (j/2) [log(1 - jz) - log(1 + jz)]
    const Complex z(re, im), j(0, 1);
    const Complex expected = 0.5 * j * (std::log(1.0 - j * z) - std::log(1.0 + j * z));
    EXPECT_LE(std::abs(out[i] - expected), 1e-14);
  }
}

TEST(Forward, TapeIsConsistent) {
  std::mt19937_64 gen(42);
  const Network net = init_xavier(std::vector<std::size_t>{6, 4, 6}, LinearMode::Widely,
                                  Activation::SplitArctan, 3);
  const ForwardTape tape = forward(net, random_vector(gen, 6));
  ASSERT_EQ(tape.layers.size(), 2u);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_LE(testing::max_abs_diff(activation_apply(net.activations[l], tape.layers[l].z), tape.layers[l].a), 1e-15);
  }
  EXPECT_EQ(&tape.input_of(1), &tape.layers[0].a);
}

TEST(Forward, ShapeAndDivergenceErrors) {
  const Network net = single_layer(ComplexMatrix::identity(2), ComplexMatrix(2, 2), ComplexVector(2),
                                   Activation::Identity);
  EXPECT_THROW(forward(net, ComplexVector(3)), ShapeError);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(forward(net, ComplexVector{{inf, 0}, {0, 0}}), DivergenceError);
}

TEST(Activation, Examples) {
  EXPECT_EQ(activation_apply(Activation::ComplexArctan, Complex(0, 0)), Complex(0, 0));
  EXPECT_NEAR(activation_apply(Activation::ComplexArctan, Complex(1, 0)).real(), std::numbers::pi / 4, 1e-15);
  const Complex s = activation_apply(Activation::SplitArctan, Complex(1, 1));
  EXPECT_NEAR(s.real(), std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(s.imag(), std::numbers::pi / 4, 1e-15);
  EXPECT_EQ(activation_apply(Activation::Identity, Complex(3, -2)), Complex(3, -2));
}

TEST(Activation, PolesThrow) {
  EXPECT_THROW(activation_apply(Activation::ComplexArctan, Complex(0, 1)), SingularityError);
  EXPECT_THROW(activation_apply(Activation::ComplexArctan, Complex(0, -1)), SingularityError);
  EXPECT_THROW(activation_derivatives(Activation::ComplexArctan, ComplexVector{{0, 1}}), SingularityError);
  EXPECT_NO_THROW(activation_apply(Activation::SplitArctan, Complex(0, 1)));
}

TEST(ActivationDerivatives, AtOrigin) {
  for (const Activation a : {Activation::ComplexArctan, Activation::SplitArctan, Activation::Identity}) {
    const ActivationDerivatives d = activation_derivatives(a, ComplexVector{{0, 0}});
    EXPECT_EQ(d.d_dz[0], Complex(1, 0));
    EXPECT_EQ(d.d_dzstar[0], Complex(0, 0));
  }
}

TEST(ActivationDerivatives, MatchNumericWirtinger) {
  std::mt19937_64 gen(43);
  std::vector<Complex> points{{0.5, 0.2}};
  for (int t = 0; t < 30; ++t) points.push_back(testing::random_complex(gen, 1.5));
  for (const Activation a : {Activation::ComplexArctan, Activation::SplitArctan, Activation::Identity}) {
    const auto g = [a](Complex z) { return activation_apply(a, z); };
    for (const Complex z : points) {
      if (std::abs(z - Complex(0, 1)) < 0.1 || std::abs(z + Complex(0, 1)) < 0.1) continue;
      const ActivationDerivatives d = activation_derivatives(a, ComplexVector{z});
      EXPECT_LE(std::abs(d.d_dz[0] - numeric_r_derivative_of_map(g, z)), 1e-7) << to_string(a);
      EXPECT_LE(std::abs(d.d_dzstar[0] - numeric_rstar_derivative_of_map(g, z)), 1e-7) << to_string(a);
    }
  }
  EXPECT_TRUE(is_holomorphic(Activation::ComplexArctan));
  EXPECT_TRUE(is_holomorphic(Activation::Identity));
  EXPECT_FALSE(is_holomorphic(Activation::SplitArctan));
}

TEST(Backward, ZeroAtOptimum) {
  std::mt19937_64 gen(44);
  const Network net = single_layer(ComplexMatrix::identity(3), ComplexMatrix(3, 3), ComplexVector(3),
                                   Activation::Identity);
  const ComplexVector x = random_vector(gen, 3);
  const ForwardTape tape = forward(net, x);
  const CostResult c = mse(tape.output(), x);
  const Gradients g = backward(net, tape, c.d_a, c.d_astar);
  EXPECT_TRUE(g.layers[0].gw1.is_zero());
  EXPECT_TRUE(g.layers[0].gw2.is_zero());
  EXPECT_EQ(testing::max_abs(g.layers[0].gb), 0.0);
}

TEST(Backward, StrictOneByOneMatchesLmsGradient) {
  // J = |w a + b - x|^2 with identity activation: dJ/dw* = (w a + b - x) conj(a).
  const Complex w{0.4, -0.3}, b{0.1, 0.2}, a{0.7, 0.5}, x{-0.2, 0.9};
  const Network net = single_layer(ComplexMatrix(1, 1, {w}), ComplexMatrix(1, 1), ComplexVector{b},
                                   Activation::Identity, LinearMode::Strictly);
  const ForwardTape tape = forward(net, ComplexVector{a});
  const CostResult c = mse(tape.output(), ComplexVector{x});
  const Gradients g = backward(net, tape, c.d_a, c.d_astar);
  const Complex e = w * a + b - x;
  EXPECT_LE(std::abs(g.layers[0].gw1(0, 0) - e * std::conj(a)), 1e-15);
  EXPECT_LE(std::abs(g.layers[0].gb[0] - e), 1e-15);
  EXPECT_TRUE(g.layers[0].gw2.is_zero());
}

TEST(Backward, HolomorphicShortcutEqualsFullRule) {
  std::mt19937_64 gen(45);
  const Network net = init_xavier(std::vector<std::size_t>{6, 4, 6}, LinearMode::Widely,
                                  Activation::ComplexArctan, 7);
  const ComplexVector x = random_vector(gen, 6);
  const ForwardTape tape = forward(net, x);
  const CostResult c = phase_amplitude(tape.output(), x, 2.0, 0.1);
  const Gradients a = backward(net, tape, c.d_a, c.d_astar, BackwardRule::Auto);
  const Gradients f = backward(net, tape, c.d_a, c.d_astar, BackwardRule::Full);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_EQ(a.layers[l].gw1, f.layers[l].gw1);
    EXPECT_EQ(a.layers[l].gw2, f.layers[l].gw2);
    EXPECT_EQ(a.layers[l].gb, f.layers[l].gb);
  }
}

TEST(Backward, AllCombinationsMatchOracle) {
  std::mt19937_64 gen(46);
  const CostKind costs[] = {Mse{}, NormalizedMse{0.1}, PhaseAmplitude{0.0, 0.1}, PhaseAmplitude{2.0, 0.1}};
  for (const LinearMode mode : {LinearMode::Strictly, LinearMode::Widely}) {
    for (const Activation act : {Activation::ComplexArctan, Activation::SplitArctan, Activation::Identity}) {
      Network net = init_xavier(std::vector<std::size_t>{6, 4, 6}, mode, act, 11);
      for (auto& l : net.layers) l.b = random_vector(gen, l.b.size(), 0.3);
      std::vector<ComplexVector> batch{random_vector(gen, 6), random_vector(gen, 6)};
      for (const CostKind& cost : costs) {
        const GradCheckReport r = check_network_gradients(net, batch, cost, 1e-6);
        EXPECT_TRUE(r.passed) << to_string(mode) << " " << to_string(act) << " " << cost_name(cost) << "\n"
                              << r.to_text();
      }
    }
  }
}

TEST(Backward, TapeMismatchThrows) {
  const Network net = init_xavier(std::vector<std::size_t>{4, 2, 4}, LinearMode::Widely, Activation::ComplexArctan, 1);
  const Network other = init_xavier(std::vector<std::size_t>{4, 3, 4}, LinearMode::Widely, Activation::ComplexArctan, 1);
  const ForwardTape tape = forward(other, ComplexVector(4));
  EXPECT_THROW(backward(net, tape, ComplexVector(4), ComplexVector(4)), ShapeError);
}

TEST(SgdUpdate, ZeroGradientOrRateLeavesNetUnchanged) {
  const Network net = init_xavier(std::vector<std::size_t>{4, 2, 4}, LinearMode::Widely, Activation::ComplexArctan, 2);
  EXPECT_EQ(sgd_update(net, Gradients::zeros_like(net), 0.1), net);
  Gradients g = Gradients::zeros_like(net);
  for (auto& l : g.layers) l.gb.assign(l.gb.size(), Complex(1, 1));
  EXPECT_EQ(sgd_update(net, g, 0.0), net);
}

TEST(SgdUpdate, QuadraticConvergesGeometrically) {
  // J = |w - c|^2 has conjugate gradient w - c, so w_k - c = (1 - lr)^k (w_0 - c).
  const Complex c{0.3, -0.8};
  Network net = single_layer(ComplexMatrix(1, 1, {Complex(2, 1)}), ComplexMatrix(1, 1), ComplexVector(1),
                             Activation::Identity);
  const double lr = 0.2;
  double prev = std::abs(net.layers[0].w1(0, 0) - c);
  for (int k = 0; k < 30; ++k) {
    Gradients g = Gradients::zeros_like(net);
    g.layers[0].gw1(0, 0) = net.layers[0].w1(0, 0) - c;
    sgd_update_in_place(net, g, lr);
    const double err = std::abs(net.layers[0].w1(0, 0) - c);
    EXPECT_NEAR(err / prev, 1.0 - lr, 1e-12);
    prev = err;
  }
}

TEST(SgdUpdate, StrictModeKeepsW2Zero) {
  Network net = init_xavier(std::vector<std::size_t>{4, 2, 4}, LinearMode::Strictly, Activation::ComplexArctan, 3);
  Gradients g = Gradients::zeros_like(net);
  for (auto& l : g.layers) {
    for (Complex& v : l.gw2.data()) v = {1, -1};
  }
  sgd_update_in_place(net, g, 0.5);
  for (const auto& l : net.layers) EXPECT_TRUE(l.w2.is_zero());
}

TEST(WidelySubsumesStrictly, MaskedTrajectoriesAreBitwiseIdentical) {
  std::mt19937_64 gen(47);
  const Network strict = init_xavier(std::vector<std::size_t>{6, 4, 6}, LinearMode::Strictly,
                                     Activation::ComplexArctan, 5);
  Network s = strict, w = strict;
  w.mode = LinearMode::Widely;
  std::vector<ComplexVector> data;
  for (int i = 0; i < 5; ++i) data.push_back(random_vector(gen, 6));
  for (int step = 0; step < 20; ++step) {
    for (const ComplexVector& x : data) {
      const ForwardTape ts = forward(s, x), tw = forward(w, x);
      ASSERT_EQ(ts.output(), tw.output());
      const CostResult cs = mse(ts.output(), x), cw = mse(tw.output(), x);
      const Gradients gs = backward(s, ts, cs.d_a, cs.d_astar);
      Gradients gw = backward(w, tw, cw.d_a, cw.d_astar);
      for (auto& l : gw.layers) std::fill(l.gw2.data().begin(), l.gw2.data().end(), Complex{});
      sgd_update_in_place(s, gs, 0.05);
      sgd_update_in_place(w, gw, 0.05);
    }
  }
  for (std::size_t l = 0; l < s.layers.size(); ++l) {
    EXPECT_EQ(s.layers[l].w1, w.layers[l].w1);
    EXPECT_EQ(s.layers[l].b, w.layers[l].b);
    EXPECT_TRUE(w.layers[l].w2.is_zero());
  }
}

TEST(InitXavier, DeterministicAndBounded) {
  const std::vector<std::size_t> dims{392, 16, 392};
  const Network a = init_xavier(dims, LinearMode::Widely, Activation::ComplexArctan, 9);
  EXPECT_EQ(a, init_xavier(dims, LinearMode::Widely, Activation::ComplexArctan, 9));
  EXPECT_NE(a, init_xavier(dims, LinearMode::Widely, Activation::ComplexArctan, 10));
  for (const auto& l : a.layers) {
    const double r = std::sqrt(6.0 / static_cast<double>(l.inputs() + l.outputs()));
    for (const ComplexMatrix* m : {&l.w1, &l.w2}) {
      for (const Complex& v : m->data()) {
        EXPECT_LE(std::abs(v.real()), r);
        EXPECT_LE(std::abs(v.imag()), r);
      }
    }
    EXPECT_EQ(testing::max_abs(l.b), 0.0);
  }
}

TEST(InitXavier, StrictModeZeroW2AndMirroredScheme) {
  const std::vector<std::size_t> dims{8, 4, 8};
  const Network s = init_xavier(dims, LinearMode::Strictly, Activation::ComplexArctan, 1);
  for (const auto& l : s.layers) EXPECT_TRUE(l.w2.is_zero());
  const Network m = init_xavier(dims, LinearMode::Widely, Activation::ComplexArctan, 1, InitScheme::MirroredDraw);
  for (const auto& l : m.layers) {
    for (const Complex& v : l.w1.data()) EXPECT_EQ(v.real(), v.imag());
  }
}

TEST(InitXavier, EntriesHaveZeroMean) {
  // 316 x 316 weights ~ 1e5 draws per part; the mean of U(-r, r) has sd r / sqrt(3n).
  const Network net = init_xavier(std::vector<std::size_t>{316, 316}, LinearMode::Strictly,
                                  Activation::Identity, 12);
  const auto& w = net.layers[0].w1;
  const double n = static_cast<double>(w.size());
  const double r = std::sqrt(6.0 / 632.0);
  double re = 0.0, im = 0.0;
  for (const Complex& v : w.data()) {
    re += v.real();
    im += v.imag();
  }
  const double sd = r / std::sqrt(3.0 * n);
  EXPECT_LE(std::abs(re / n), 3 * sd);
  EXPECT_LE(std::abs(im / n), 3 * sd);
}

TEST(InitXavier, EmptyDimsThrow) {
  EXPECT_THROW(init_xavier(std::vector<std::size_t>{}, LinearMode::Widely, Activation::ComplexArctan, 1), ConfigError);
  EXPECT_THROW(init_xavier(std::vector<std::size_t>{4}, LinearMode::Widely, Activation::ComplexArctan, 1), ConfigError);
}

TEST(Network, ParameterParityBetweenModes) {
  const Network s = init_xavier(std::vector<std::size_t>{392, 32, 392}, LinearMode::Strictly, Activation::ComplexArctan, 1);
  const Network w = init_xavier(std::vector<std::size_t>{392, 16, 392}, LinearMode::Widely, Activation::ComplexArctan, 1);
  EXPECT_EQ(s.parameter_count(false), w.parameter_count(false));
  // Biases break exact parity: 2 (32 + 392) vs 2 (16 + 392) real scalars.
  EXPECT_EQ(s.parameter_count(true) - w.parameter_count(true), 2u * 16u);
}

TEST(Network, CheckRejectsNonZeroW2InStrictMode) {
  Network net = init_xavier(std::vector<std::size_t>{4, 2, 4}, LinearMode::Strictly, Activation::ComplexArctan, 1);
  net.layers[0].w2(0, 0) = {1, 0};
  EXPECT_THROW(net.check(), ConfigError);
}

TEST(Network, EnumNamesRoundTrip) {
  for (const Activation a : {Activation::ComplexArctan, Activation::SplitArctan, Activation::Identity}) {
    EXPECT_EQ(parse_activation(to_string(a)), a);
  }
  for (const LinearMode m : {LinearMode::Strictly, LinearMode::Widely}) EXPECT_EQ(parse_linear_mode(to_string(m)), m);
  for (const InitScheme s : {InitScheme::SharedStream, InitScheme::MirroredDraw}) {
    EXPECT_EQ(parse_init_scheme(to_string(s)), s);
  }
  EXPECT_THROW(parse_activation("tanh"), ConfigError);
}

}  // namespace
}  // namespace wlcae
