#include "wlcae/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "wlcae/errors.hpp"

namespace wlcae {
namespace {

constexpr std::size_t kImageSide = 28;
constexpr double kDivergedCost = 1e12;

std::vector<std::size_t> model_dims(const ExperimentConfig& c, std::size_t input_dim) {
  return {input_dim, c.hidden, input_dim};
}

bool diverging(double cost) { return !std::isfinite(cost) || cost > kDivergedCost; }

bool finite_params(const Network& net) {
  for (const auto& p : net.layers) {
    if (!all_finite(p.w1.data()) || !all_finite(p.w2.data()) || !all_finite(p.b)) return false;
  }
  return true;
}

}  // namespace

PreparedData prepare_data(const ExperimentConfig& c, const Dataset& pool) {
  c.validate();
  const std::size_t h = pool.images.empty() ? kImageSide : pool.images.front().height;
  const std::size_t w = pool.images.empty() ? kImageSide : pool.images.front().width;
  PreparedData d{SpectrumCodec(c.codec, h, w, c.codec_scale), {}, {}, {}, {}};
  Dataset train_set, eval_set;
  if (c.eval == EvalSplit::HeldOut) {
    std::tie(train_set, eval_set) = sample_disjoint(pool, c.samples_per_class, c.samples_per_class, c.seed);
  } else {
    train_set = sample_per_class(pool, c.samples_per_class, c.seed);
  }
  d.train_images = std::move(train_set.images);
  for (const RealImage& img : d.train_images) d.train_inputs.push_back(d.codec.encode(img));
  if (c.eval == EvalSplit::HeldOut) {
    d.eval_images = std::move(eval_set.images);
    for (const RealImage& img : d.eval_images) d.eval_inputs.push_back(d.codec.encode(img));
  } else {
    d.eval_images = d.train_images;
    d.eval_inputs = d.train_inputs;
  }
  return d;
}

std::vector<RealImage> reconstruct(const Network& net, const SpectrumCodec& codec,
                                   std::span<const ComplexVector> inputs) {
  std::vector<RealImage> out;
  out.reserve(inputs.size());
  for (const ComplexVector& x : inputs) out.push_back(codec.decode(predict(net, x)));
  return out;
}

Evaluation evaluate(const Network& net, const CostKind& cost, const SpectrumCodec& codec,
                    std::span<const ComplexVector> inputs, std::span<const RealImage> images) {
  if (inputs.size() != images.size() || inputs.empty()) {
    throw ShapeError("evaluate needs equally many (>0) inputs and images");
  }
  Evaluation e;
  std::vector<RealImage> recon;
  recon.reserve(inputs.size());
  for (const ComplexVector& x : inputs) {
    const ComplexVector y = predict(net, x);
    e.cost += cost_value(cost, y, x);
    recon.push_back(codec.decode(y));
  }
  e.cost /= static_cast<double>(inputs.size());
  e.psnr = pooled_psnr(images, recon);
  return e;
}

TrainResult train(const ExperimentConfig& c, const PreparedData& data) {
  c.validate();
  if (data.train_inputs.empty()) throw DataError("no training samples");
  const CostKind cost = c.cost_kind();
  const std::size_t dim = data.codec.encoded_length();
  const std::vector<std::size_t> dims = model_dims(c, dim);

  TrainResult r;
  r.net = init_xavier(dims, c.mode, c.activation, c.seed, c.init_scheme);

  const std::size_t n = data.train_inputs.size();
  const std::size_t batch = c.batch_size == 0 ? n : std::min<std::size_t>(c.batch_size, n);
  double last_cost = std::numeric_limits<double>::quiet_NaN();
  double last_psnr = std::numeric_limits<double>::quiet_NaN();

  auto mark_diverged = [&](std::uint32_t epoch) {
    r.diverged = true;
    r.log.add({epoch, last_cost, last_psnr, true});
  };

  auto log_state = [&](std::uint32_t epoch) -> bool {
    Evaluation e;
    try {
      e = evaluate(r.net, cost, data.codec, data.eval_inputs, data.eval_images);
      if (c.eval == EvalSplit::HeldOut) {
        e.cost = evaluate(r.net, cost, data.codec, data.train_inputs, data.train_images).cost;
      }
    } catch (const DivergenceError&) {
      e.cost = std::numeric_limits<double>::infinity();
    } catch (const SingularityError&) {
      e.cost = std::numeric_limits<double>::infinity();
    }
    if (diverging(e.cost)) {
      mark_diverged(epoch);
      return false;
    }
    last_cost = e.cost;
    last_psnr = e.psnr;
    r.log.add({epoch, e.cost, e.psnr, false});
    return true;
  };

  if (!log_state(0)) return r;

  Gradients grads = Gradients::zeros_like(r.net);
  for (std::uint32_t epoch = 0; epoch < c.epochs; ++epoch) {
    bool ok = true;
    try {
      for (std::size_t start = 0; start < n && ok; start += batch) {
        const std::size_t stop = std::min(n, start + batch);
        const double scale = 1.0 / static_cast<double>(stop - start);
        for (auto& g : grads.layers) {
          std::fill(g.gw1.data().begin(), g.gw1.data().end(), Complex{});
          std::fill(g.gw2.data().begin(), g.gw2.data().end(), Complex{});
          std::fill(g.gb.begin(), g.gb.end(), Complex{});
        }
        for (std::size_t s = start; s < stop; ++s) {
          const ComplexVector& x = data.train_inputs[s];
          const ForwardTape tape = forward(r.net, x);
          const CostResult cr = evaluate(cost, tape.output(), x);
          if (diverging(cr.value)) {
            ok = false;
            break;
          }
          backward_accumulate(r.net, tape, cr.d_a, cr.d_astar, scale, grads);
        }
        if (!ok) break;
        sgd_update_in_place(r.net, grads, c.learning_rate);
        if (!finite_params(r.net)) ok = false;
      }
    } catch (const DivergenceError&) {
      ok = false;
    } catch (const SingularityError&) {
      ok = false;
    }
    const std::uint32_t done = epoch + 1;
    if (!ok) {
      mark_diverged(done);
      return r;
    }
    if (done % c.log_every == 0 || done == c.epochs) {
      if (!log_state(done)) return r;
    }
  }
  return r;
}

TrainResult train(const ExperimentConfig& c, const Dataset& pool) {
  return train(c, prepare_data(c, pool));
}

std::uint32_t match_parameter_counts(std::size_t input_dim, std::uint32_t hidden_strict) {
  if (input_dim == 0) throw ConfigError("input dimension must be positive");
  if (hidden_strict == 0 || hidden_strict % 2 != 0) {
    throw ConfigError("strictly linear hidden width must be a positive even number, got " +
                      std::to_string(hidden_strict));
  }
  return hidden_strict / 2;
}

bool is_unstable(const RunLog& log) {
  double best = std::numeric_limits<double>::infinity();
  for (const RunLogRow& row : log.rows()) {
    if (row.diverged) return true;
    if (row.cost > best * 1.01) return true;
    best = std::min(best, row.cost);
  }
  return false;
}

std::string stability_run_name(const StabilityRun& r) {
  return "lr" + format_double(r.learning_rate) + "_" + r.variant;
}

std::string StabilityReport::summary_csv() const {
  std::string out = "lr,variant,mode,codec,hidden,final_epoch,final_cost,final_psnr,diverged,unstable\n";
  for (const StabilityRun& r : runs) {
    const RunLogRow& last = r.result.log.back();
    out += format_double(r.learning_rate) + "," + r.variant + "," + to_string(r.config.mode) + "," +
           to_string(r.config.codec) + "," + std::to_string(r.config.hidden) + "," +
           std::to_string(last.epoch) + "," + format_double(last.cost) + "," +
           format_double(last.psnr) + "," + (r.result.diverged ? "true" : "false") + "," +
           (r.unstable ? "true" : "false") + "\n";
  }
  return out;
}

StabilityReport compare_stability(const ExperimentConfig& base, std::span<const double> lrs,
                                  const Dataset& pool,
                                  const std::optional<std::filesystem::path>& out_dir) {
  if (lrs.empty()) throw ConfigError("stability comparison needs at least one learning rate");
  base.validate();
  const SpectrumCodec pixel(CodecKind::PixelPair, kImageSide, kImageSide);
  const std::uint32_t widely_hidden = match_parameter_counts(pixel.encoded_length(), base.hidden);

  struct Variant {
    const char* name;
    LinearMode mode;
    CodecKind codec;
    std::uint32_t hidden;
  };
  const Variant variants[] = {
      {"strictly-pixel-pair", LinearMode::Strictly, CodecKind::PixelPair, base.hidden},
      {"widely-pixel-pair", LinearMode::Widely, CodecKind::PixelPair, widely_hidden},
      {"widely-dft", LinearMode::Widely, CodecKind::HalfSpectrumDft, widely_hidden},
  };

  if (out_dir) std::filesystem::create_directories(*out_dir);
  StabilityReport report;
  for (const double lr : lrs) {
    for (const Variant& v : variants) {
      StabilityRun run;
      run.learning_rate = lr;
      run.variant = v.name;
      run.config = base;
      run.config.learning_rate = lr;
      run.config.mode = v.mode;
      run.config.codec = v.codec;
      run.config.hidden = v.hidden;
      run.result = train(run.config, pool);
      run.unstable = is_unstable(run.result.log);
      if (out_dir) write_run_csv(run.result.log, *out_dir / (stability_run_name(run) + ".csv"));
      report.runs.push_back(std::move(run));
    }
  }
  if (out_dir) {
    std::ofstream f(*out_dir / "summary.csv");
    f << report.summary_csv();
    if (!f) throw IoError("failed writing " + (*out_dir / "summary.csv").string());
  }
  return report;
}

std::string AlphaSweepReport::summary_csv() const {
  std::string out = "alpha,final_epoch,final_cost,final_psnr,diverged\n";
  for (const AlphaSweepEntry& e : entries) {
    const RunLogRow& last = e.result.log.back();
    out += format_double(e.alpha) + "," + std::to_string(last.epoch) + "," + format_double(last.cost) +
           "," + format_double(last.psnr) + "," + (e.result.diverged ? "true" : "false") + "\n";
  }
  return out;
}

AlphaSweepReport sweep_alpha(const ExperimentConfig& base, std::span<const double> alphas,
                             const Dataset& pool,
                             const std::optional<std::filesystem::path>& out_dir) {
  if (base.cost != CostTag::PhaseAmplitude) {
    throw ConfigError("alpha sweep requires the phase-amplitude cost");
  }
  if (alphas.empty()) throw ConfigError("alpha sweep needs at least one alpha");
  base.validate();
  const PreparedData data = prepare_data(base, pool);
  if (out_dir) std::filesystem::create_directories(*out_dir);
  AlphaSweepReport report;
  for (const double a : alphas) {
    ExperimentConfig c = base;
    c.alpha = a;
    AlphaSweepEntry e{a, train(c, data)};
    if (out_dir) write_run_csv(e.result.log, *out_dir / ("alpha" + format_double(a) + ".csv"));
    report.entries.push_back(std::move(e));
  }
  if (out_dir) {
    std::ofstream f(*out_dir / "summary.csv");
    f << report.summary_csv();
    if (!f) throw IoError("failed writing " + (*out_dir / "summary.csv").string());
  }
  return report;
}

}  // namespace wlcae
