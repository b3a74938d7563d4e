#include "wlcae/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "wlcae/errors.hpp"

namespace wlcae {
namespace {

void require_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("finite-difference step must be positive");
}

double eval_checked(const RealFunction& f, std::span<const Complex> z, std::size_t coord) {
  const double v = f(z);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "non-finite function value at perturbed coordinate " << coord << " (z = " << z[coord]
       << ")";
    throw EvaluationError(os.str(), coord);
  }
  return v;
}

// Partial derivatives (df/dx_i, df/dy_i) for every entry.
std::pair<std::vector<double>, std::vector<double>> partials(const RealFunction& f,
                                                             std::span<const Complex> z, double h) {
  require_step(h);
  ComplexVector p(z.begin(), z.end());
  std::vector<double> dx(z.size()), dy(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const Complex orig = p[i];
    p[i] = orig + Complex(h, 0.0);
    const double fxp = eval_checked(f, p, i);
    p[i] = orig - Complex(h, 0.0);
    const double fxm = eval_checked(f, p, i);
    p[i] = orig + Complex(0.0, h);
    const double fyp = eval_checked(f, p, i);
    p[i] = orig - Complex(0.0, h);
    const double fym = eval_checked(f, p, i);
    p[i] = orig;
    dx[i] = (fxp - fxm) / (2.0 * h);
    dy[i] = (fyp - fym) / (2.0 * h);
  }
  return {std::move(dx), std::move(dy)};
}

}  // namespace

ComplexVector numeric_r_derivative(const RealFunction& f, std::span<const Complex> z, double h) {
  return numeric_cr_gradient(f, z, h).d_z;
}

ComplexVector numeric_rstar_derivative(const RealFunction& f, std::span<const Complex> z, double h) {
  return numeric_cr_gradient(f, z, h).d_zstar;
}

CRGradient numeric_cr_gradient(const RealFunction& f, std::span<const Complex> z, double h) {
  const auto [dx, dy] = partials(f, z, h);
  CRGradient g{ComplexVector(z.size()), ComplexVector(z.size())};
  for (std::size_t i = 0; i < z.size(); ++i) {
    g.d_z[i] = 0.5 * Complex(dx[i], -dy[i]);
    g.d_zstar[i] = 0.5 * Complex(dx[i], dy[i]);
  }
  return g;
}

Complex numeric_r_derivative_of_map(const ComplexFunction& g, Complex z, double h) {
  require_step(h);
  const Complex gx = (g(z + Complex(h, 0.0)) - g(z - Complex(h, 0.0))) / (2.0 * h);
  const Complex gy = (g(z + Complex(0.0, h)) - g(z - Complex(0.0, h))) / (2.0 * h);
  return 0.5 * (gx - Complex(0.0, 1.0) * gy);
}

Complex numeric_rstar_derivative_of_map(const ComplexFunction& g, Complex z, double h) {
  require_step(h);
  const Complex gx = (g(z + Complex(h, 0.0)) - g(z - Complex(h, 0.0))) / (2.0 * h);
  const Complex gy = (g(z + Complex(0.0, h)) - g(z - Complex(0.0, h))) / (2.0 * h);
  return 0.5 * (gx + Complex(0.0, 1.0) * gy);
}

// --- network check ---------------------------------------------------------

double batch_cost(const Network& net, std::span<const ComplexVector> batch, const CostKind& cost) {
  if (batch.empty()) throw ShapeError("empty batch");
  double sum = 0.0;
  for (const ComplexVector& x : batch) sum += cost_value(cost, predict(net, x), x);
  return sum / static_cast<double>(batch.size());
}

Gradients batch_gradients(const Network& net, std::span<const ComplexVector> batch,
                          const CostKind& cost, BackwardRule rule) {
  if (batch.empty()) throw ShapeError("empty batch");
  Gradients g = Gradients::zeros_like(net);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const ComplexVector& x : batch) {
    const ForwardTape tape = forward(net, x);
    const CostResult c = evaluate(cost, tape.output(), x);
    backward_accumulate(net, tape, c.d_a, c.d_astar, scale, g, rule);
  }
  return g;
}

double GradCheckReport::max_rel_error() const {
  double m = 0.0;
  for (const auto& t : tensors) m = std::max(m, t.max_rel_error);
  return m;
}

std::string GradCheckReport::to_text() const {
  std::ostringstream os;
  char buf[256];
  for (const auto& t : tensors) {
    std::snprintf(buf, sizeof buf, "%-12s checked=%-5zu skipped=%-5zu max_rel_err=%.3e max_abs_err=%.3e worst=%zu.%s\n",
                  t.name.c_str(), t.checked, t.skipped, t.max_rel_error, t.max_abs_error,
                  t.worst_index, t.worst_part.c_str());
    os << buf;
  }
  if (!skip_reason.empty()) os << "skipped: " << skip_reason << "\n";
  std::snprintf(buf, sizeof buf, "max_rel_err=%.3e tol=%.1e %s\n", max_rel_error(), tolerance,
                passed ? "PASS" : "FAIL");
  os << buf;
  return os.str();
}

namespace {

// Empty string when the base point is safely away from every non-smooth point.
std::string kink_proximity(const Network& net, std::span<const ComplexVector> batch,
                           const CostKind& cost, double margin) {
  const bool origin_kink = std::holds_alternative<PhaseAmplitude>(cost) &&
                           std::get<PhaseAmplitude>(cost).alpha != 1.0;
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const ForwardTape tape = forward(net, batch[s]);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      if (net.activations[l] != Activation::ComplexArctan) continue;
      for (const Complex& z : tape.layers[l].z) {
        if (std::abs(z - Complex(0, 1)) <= margin || std::abs(z + Complex(0, 1)) <= margin) {
          return "pre-activation near an arctan pole in sample " + std::to_string(s);
        }
      }
    }
    if (origin_kink) {
      for (const Complex& y : tape.output()) {
        if (std::abs(y) <= margin) return "output near |y| = 0 in sample " + std::to_string(s);
      }
    }
  }
  return {};
}

}  // namespace

GradCheckReport check_network_gradients(const Network& net, std::span<const ComplexVector> batch,
                                        const CostKind& cost, double tol,
                                        const GradCheckOptions& options) {
  net.check();
  validate(cost);
  require_step(options.step);
  for (const ComplexVector& x : batch) {
    if (x.size() != net.input_dim() || x.size() != net.output_dim()) {
      throw ShapeError("batch sample width does not match the autoencoder dims");
    }
  }
  const double h = options.step;
  const Gradients analytic = batch_gradients(net, batch, cost, options.rule);

  GradCheckReport report;
  report.tolerance = tol;
  report.skip_reason = kink_proximity(net, batch, cost, options.kink_margin_factor * h);
  const bool skip_all = !report.skip_reason.empty();

  Network probe = net;
  auto check_tensor = [&](const std::string& name, std::span<Complex> params,
                          std::span<const Complex> grads) {
    TensorCheck t;
    t.name = name;
    std::vector<double> numeric, expected;
    std::vector<std::pair<std::size_t, const char*>> where;
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (skip_all) {
        t.skipped += 2;
        continue;
      }
      const Complex orig = params[k];
      for (int part = 0; part < 2; ++part) {
        const Complex dir = part == 0 ? Complex(h, 0.0) : Complex(0.0, h);
        params[k] = orig + dir;
        const double jp = batch_cost(probe, batch, cost);
        params[k] = orig - dir;
        const double jm = batch_cost(probe, batch, cost);
        params[k] = orig;
        if (!std::isfinite(jp) || !std::isfinite(jm)) {
          throw EvaluationError("non-finite cost while perturbing " + name, k);
        }
        numeric.push_back((jp - jm) / (2.0 * h));
        expected.push_back(2.0 * (part == 0 ? grads[k].real() : grads[k].imag()));
        where.emplace_back(k, part == 0 ? "re" : "im");
        ++t.checked;
      }
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
      scale = std::max({scale, std::abs(numeric[i]), std::abs(expected[i])});
    }
    const double denom = std::max(scale, 1e-8);
    for (std::size_t i = 0; i < numeric.size(); ++i) {
      const double err = std::abs(numeric[i] - expected[i]);
      if (err > t.max_abs_error) {
        t.max_abs_error = err;
        t.worst_index = where[i].first;
        t.worst_part = where[i].second;
      }
    }
    t.max_rel_error = t.max_abs_error / denom;
    if (t.max_rel_error > tol) report.passed = false;
    report.tensors.push_back(std::move(t));
  };

  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const std::string prefix = "layer" + std::to_string(l + 1) + ".";
    LayerParams& p = probe.layers[l];
    const LayerGradients& g = analytic.layers[l];
    check_tensor(prefix + "W1", p.w1.data(), g.gw1.data());
    if (net.mode == LinearMode::Widely) check_tensor(prefix + "W2", p.w2.data(), g.gw2.data());
    check_tensor(prefix + "b", p.b, g.gb);
  }
  return report;
}

}  // namespace wlcae
