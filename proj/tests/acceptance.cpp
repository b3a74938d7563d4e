// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any selected criterion fails.
//
//   acceptance            run every criterion
//   acceptance 1 3 4      run a subset
//
// Criteria 5 to 7 train on MNIST from WLCAE_DATA_DIR (environment variable,
// else the directory baked in at configure time).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "wlcae/complex_core.hpp"
#include "wlcae/dataio.hpp"
#include "wlcae/errors.hpp"
#include "wlcae/gradcheck.hpp"
#include "wlcae/kernels.hpp"
#include "wlcae/losses.hpp"
#include "wlcae/network.hpp"
#include "wlcae/rng.hpp"
#include "wlcae/spectra.hpp"
#include "wlcae/trainer.hpp"

namespace {

using namespace wlcae;
using Clock = std::chrono::steady_clock;

// Desk-scale experiment settings.
constexpr std::uint32_t kSamplesPerClass = 50;
constexpr std::uint32_t kStrictHidden = 32;
constexpr std::uint32_t kWidelyHidden = 16;
constexpr std::uint32_t kOrderingEpochs = 1000;
constexpr std::uint32_t kDeskEpochs = 500;
constexpr double kOrderingLr = 0.003;
constexpr double kDftScale = 0.5;
constexpr std::uint64_t kSeeds[] = {1, 2, 3};

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

Dataset mnist() {
  static std::optional<Dataset> cached;
  if (!cached) {
    const char* env = std::getenv("WLCAE_DATA_DIR");
    cached = load_mnist_dir(env && *env ? env : WLCAE_DATA_DIR);
  }
  return *cached;
}

ExperimentConfig desk_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.samples_per_class = kSamplesPerClass;
  c.hidden = kWidelyHidden;
  c.mode = LinearMode::Widely;
  c.learning_rate = kOrderingLr;
  c.epochs = kDeskEpochs;
  c.seed = seed;
  c.codec_scale = kDftScale;
  return c;
}

double final_cost(const TrainResult& r) {
  const double c = r.log.back().cost;
  return r.diverged || !std::isfinite(c) ? std::numeric_limits<double>::infinity() : c;
}

// 1 --------------------------------------------------------------------------------

Verdict gradient_correctness() {
  constexpr double kTol = 1e-6;
  const std::size_t dims[] = {6, 4, 6};
  const std::vector<CostKind> costs = {Mse{}, NormalizedMse{0.1}, PhaseAmplitude{0.0, 0.1},
                                       PhaseAmplitude{1.0, 0.1}, PhaseAmplitude{2.0, 0.1}};
  double worst = 0.0;
  std::size_t combos = 0, failed = 0, skipped = 0;
  std::string first_failure;
  for (const Activation act : {Activation::ComplexArctan, Activation::SplitArctan}) {
    for (const CostKind& cost : costs) {
      Network net = init_xavier(dims, LinearMode::Widely, act, 7 + combos);
      std::mt19937_64 gen = substream(7 + combos, "acceptance-gradcheck");
      for (auto& layer : net.layers) {
        for (Complex& b : layer.b) b = testing::random_complex(gen, 0.5);
      }
      std::vector<ComplexVector> batch;
      for (int i = 0; i < 4; ++i) batch.push_back(testing::random_vector(gen, 6));
      const GradCheckReport r = check_network_gradients(net, batch, cost, kTol);
      worst = std::max(worst, r.max_rel_error());
      for (const TensorCheck& t : r.tensors) skipped += t.skipped;
      if (!r.passed) {
        ++failed;
        if (first_failure.empty()) first_failure = " first_failure=" + to_string(act) + "/" + cost_name(cost);
      }
      ++combos;
    }
  }
  return {failed == 0, "combinations=" + std::to_string(combos) + " failed=" + std::to_string(failed) +
                           " max_rel_err=" + fmt(worst) + " tol=1e-6 skipped_coords=" +
                           std::to_string(skipped) + first_failure};
}

// 2 --------------------------------------------------------------------------------

Verdict algebraic_identities() {
  constexpr double kTol = 1e-12;
  std::mt19937_64 gen(2024);
  double factor_err = 0.0, reduction_err = 0.0, composite_err = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Complex y = testing::random_complex(gen), x = testing::random_complex(gen);
    const MseFactors f = factorize_mse(y, x);
    factor_err = std::max(factor_err, std::abs(f.amplitude + f.phase - std::norm(y - x)));

    const Complex a[] = {y}, t[] = {x};
    const CostResult pa = phase_amplitude(a, t, 1.0, 0.1);
    const CostResult nm = normalized_mse(a, t, 0.1);
    reduction_err = std::max({reduction_err, std::abs(pa.value - nm.value), std::abs(pa.d_astar[0] - nm.d_astar[0]),
                              std::abs(pa.d_a[0] - nm.d_a[0])});
  }
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t rows = dim(gen), cols = dim(gen);
    const ComplexMatrix w1 = testing::random_matrix(gen, rows, cols);
    const ComplexMatrix w2 = testing::random_matrix(gen, rows, cols);
    const ComplexVector a = testing::random_vector(gen, cols);
    const ComplexVector direct = widely_linear(w1, w2, a);
    const ComplexVector composite = apply_real_composite(to_real_composite(w1, w2), a);
    composite_err = std::max(composite_err, testing::max_abs_diff(direct, composite));
  }
  const bool pass = factor_err <= kTol && reduction_err <= kTol && composite_err <= kTol;
  return {pass, "factorization_err=" + fmt(factor_err) + " alpha1_reduction_err=" + fmt(reduction_err) +
                    " real_composite_err=" + fmt(composite_err) + " tol=1e-12"};
}

// 3 --------------------------------------------------------------------------------

double wrapped_phase_diff(Complex a, Complex b) { return std::abs(std::arg(a * std::conj(b))); }

Verdict phase_swap_demo() {
  constexpr double kTol = 1e-10;
  constexpr double kNegligible = 1e-9;
  const Dataset ds = mnist();
  const RealImage& i1 = ds.images[0];
  auto other = std::find_if(ds.labels.begin(), ds.labels.end(), [&](auto l) { return l != ds.labels[0]; });
  const RealImage& i2 = ds.images[static_cast<std::size_t>(other - ds.labels.begin())];

  const PhaseSwapResult self = phase_swap(i1, i1);
  double self_err = 0.0;
  for (std::size_t k = 0; k < i1.pixels.size(); ++k) {
    self_err = std::max({self_err, std::abs(self.first.pixels[k] - i1.pixels[k]),
                         std::abs(self.second.pixels[k] - i1.pixels[k])});
  }

  const PhaseSwapResult r = phase_swap(i1, i2);
  const ComplexVector f1 = dft2(i1), f2 = dft2(i2), g1 = dft2(r.first), g2 = dft2(r.second);
  double mag_err = 0.0, phase_err = 0.0;
  std::size_t compared = 0;
  for (std::size_t k = 0; k < f1.size(); ++k) {
    mag_err = std::max({mag_err, std::abs(std::abs(g1[k]) - std::abs(f1[k])),
                        std::abs(std::abs(g2[k]) - std::abs(f2[k]))});
    if (std::abs(f1[k]) > kNegligible && std::abs(f2[k]) > kNegligible) {
      phase_err = std::max({phase_err, wrapped_phase_diff(g1[k], f2[k]), wrapped_phase_diff(g2[k], f1[k])});
      ++compared;
    }
  }
  const bool pass = self_err <= kTol && mag_err <= kTol && phase_err <= 1e-8;
  return {pass, "self_swap_err=" + fmt(self_err) + " magnitude_err=" + fmt(mag_err) + " tol=1e-10" +
                    " donor_phase_err=" + fmt(phase_err) + " tol=1e-8 coefficients=" + std::to_string(compared)};
}

// 4 --------------------------------------------------------------------------------

Verdict codec_round_trips() {
  constexpr double kTol = 1e-12;
  const Dataset ds = mnist();
  const SpectrumCodec codecs[] = {SpectrumCodec(CodecKind::PixelPair, 28, 28),
                                  SpectrumCodec(CodecKind::HalfSpectrumDft, 28, 28, 1.0),
                                  SpectrumCodec(CodecKind::HalfSpectrumDft, 28, 28, kDftScale)};
  double worst = 0.0;
  for (const SpectrumCodec& codec : codecs) {
    for (std::size_t i = 0; i < 100; ++i) {
      const RealImage back = codec.decode(codec.encode(ds.images[i]));
      for (std::size_t k = 0; k < back.pixels.size(); ++k) {
        worst = std::max(worst, std::abs(back.pixels[k] - ds.images[i].pixels[k]));
      }
    }
  }
  return {worst <= kTol, "digits=100 codecs=pixel-pair,dft(scale 1),dft(scale " + fmt(kDftScale) +
                             ") max_err=" + fmt(worst) + " tol=1e-12"};
}

// 5 --------------------------------------------------------------------------------

Verdict cost_function_ordering() {
  constexpr double kMargin = 0.3;
  struct Row {
    const char* name;
    CodecKind codec;
    CostTag cost;
    double psnr = 0.0;
  };
  Row rows[] = {{"mse+pixel-pair", CodecKind::PixelPair, CostTag::Mse},
                {"mse+dft", CodecKind::HalfSpectrumDft, CostTag::Mse},
                {"nmse+dft", CodecKind::HalfSpectrumDft, CostTag::NormalizedMse}};
  const Dataset pool = mnist();
  for (Row& row : rows) {
    for (const std::uint64_t seed : kSeeds) {
      ExperimentConfig c = desk_config(seed);
      c.codec = row.codec;
      c.cost = row.cost;
      c.epochs = kOrderingEpochs;
      c.log_every = kOrderingEpochs;
      row.psnr += train(c, pool).log.back().psnr / std::size(kSeeds);
    }
  }
  const double m1 = rows[2].psnr - rows[1].psnr, m2 = rows[1].psnr - rows[0].psnr;
  std::string detail;
  for (const Row& row : rows) detail += std::string(row.name) + "=" + fmt(row.psnr) + "dB ";
  detail += "margin(nmse+dft - mse+dft)=" + fmt(m1) + " margin(mse+dft - mse+pixel-pair)=" + fmt(m2) +
            " required>=0.3";
  return {m1 >= kMargin && m2 >= kMargin, detail};
}

// 6 --------------------------------------------------------------------------------

Verdict stability_claim() {
  const double lrs[] = {0.01, 0.006, 0.005, 0.003};  // largest first
  const Dataset pool = mnist();
  auto config = [](LinearMode mode, double lr, std::uint64_t seed) {
    ExperimentConfig c = desk_config(seed);
    c.mode = mode;
    c.hidden = mode == LinearMode::Strictly ? kStrictHidden : match_parameter_counts(392, kStrictHidden);
    c.learning_rate = lr;
    return c;
  };
  std::string searched;
  for (const double lr : lrs) {
    std::vector<TrainResult> strict;
    std::size_t unstable = 0;
    for (const std::uint64_t seed : kSeeds) {
      strict.push_back(train(config(LinearMode::Strictly, lr, seed), pool));
      unstable += is_unstable(strict.back().log);
    }
    searched += " lr" + fmt(lr) + ":unstable_seeds=" + std::to_string(unstable);
    if (unstable == 0) continue;

    std::size_t wins = 0;
    std::string costs;
    for (std::size_t s = 0; s < std::size(kSeeds); ++s) {
      const TrainResult widely = train(config(LinearMode::Widely, lr, kSeeds[s]), pool);
      const double cw = final_cost(widely), cs = final_cost(strict[s]);
      wins += cw <= cs;
      costs += " seed" + std::to_string(kSeeds[s]) + ":widely=" + fmt(cw) + ",strictly=" + fmt(cs);
    }
    return {wins >= 2, "destabilizing_lr=" + fmt(lr) + " widely_wins=" + std::to_string(wins) + "/3" + costs};
  }
  return {false, "no tested learning rate destabilized the strictly linear model;" + searched};
}

// 7 --------------------------------------------------------------------------------

Verdict alpha_sweep_trend() {
  const double alphas[] = {0.5, 1.0, 2.0, 4.0};
  std::vector<double> mean(std::size(alphas), 0.0);
  const Dataset pool = mnist();
  for (const std::uint64_t seed : kSeeds) {
    ExperimentConfig c = desk_config(seed);
    c.codec = CodecKind::HalfSpectrumDft;
    c.cost = CostTag::PhaseAmplitude;
    const AlphaSweepReport r = sweep_alpha(c, alphas, pool);
    for (std::size_t i = 0; i < r.entries.size(); ++i) mean[i] += r.entries[i].result.log.back().psnr / 3.0;
  }
  std::string detail;
  for (std::size_t i = 0; i < mean.size(); ++i) detail += "alpha" + fmt(alphas[i]) + "=" + fmt(mean[i]) + "dB ";
  const double best = *std::max_element(mean.begin(), mean.end());
  detail += "max=" + fmt(best) + " at_alpha1=" + fmt(mean[1]);
  return {best >= mean[1], detail};
}

// 8 --------------------------------------------------------------------------------

Verdict determinism() {
  const Dataset pool = mnist();
  std::size_t mismatches = 0, runs = 0;
  for (const CostTag cost : {CostTag::Mse, CostTag::PhaseAmplitude}) {
    ExperimentConfig c = desk_config(11);
    c.codec = cost == CostTag::Mse ? CodecKind::PixelPair : CodecKind::HalfSpectrumDft;
    c.cost = cost;
    c.alpha = 2.0;
    c.samples_per_class = 10;
    c.epochs = 40;
    c.log_every = 5;
    const std::string a = format_run_csv(train(c, pool).log);
    const std::string b = format_run_csv(train(c, pool).log);
    mismatches += a != b;
    ++runs;
  }
  ExperimentConfig s = desk_config(12);
  s.samples_per_class = 5;
  s.epochs = 20;
  const double lrs[] = {0.006};
  const StabilityReport r1 = compare_stability(s, lrs, pool), r2 = compare_stability(s, lrs, pool);
  for (std::size_t i = 0; i < r1.runs.size(); ++i) {
    mismatches += format_run_csv(r1.runs[i].result.log) != format_run_csv(r2.runs[i].result.log);
    ++runs;
  }
  return {mismatches == 0, "reruns=" + std::to_string(runs) + " csv_mismatches=" + std::to_string(mismatches)};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: none stated
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion criteria[] = {
      {1, "gradient-correctness", 30, gradient_correctness},
      {2, "algebraic-identities", 5, algebraic_identities},
      {3, "phase-swap", 1, phase_swap_demo},
      {4, "codec-round-trips", 5, codec_round_trips},
      {5, "cost-function-ordering", 15 * 60, cost_function_ordering},
      {6, "stability", 0, stability_claim},
      {7, "alpha-sweep-trend", 0, alpha_sweep_trend},
      {8, "determinism", 0, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  std::cout << "kernels=" << kernels::active().name << "\n" << std::flush;
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      v.pass = false;
      v.detail += " over_time_limit=" + fmt(c.time_limit_s) + "s";
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << " (" << fmt(secs, 3)
              << "s): " << v.detail << "\n"
              << std::flush;
  }
  return failures == 0 ? 0 : 1;
}
