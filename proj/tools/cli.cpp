#include "cli.hpp"

#include <curl/curl.h>
#include <zlib.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "wlcae/checkpoint.hpp"
#include "wlcae/dataio.hpp"
#include "wlcae/errors.hpp"
#include "wlcae/gradcheck.hpp"
#include "wlcae/kernels.hpp"
#include "wlcae/rng.hpp"
#include "wlcae/spectra.hpp"
#include "wlcae/trainer.hpp"

namespace wlcae::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kDefaultMnistUrl = "https://ossci-datasets.s3.amazonaws.com/mnist/";

/// Experiment flags shared by train, stability and sweep-alpha. Every config
/// key is exposed as --<key>; --config loads a file that flags then override.
struct ExperimentFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "Experiment config file (key = value lines)");
    for (const auto& [key, value] : config_entries(ExperimentConfig{})) {
      options[key] = app->add_option("--" + key, values[key], "Config key '" + key + "'");
    }
  }

  ExperimentConfig resolve(ExperimentConfig defaults) const {
    ExperimentConfig c = config_path.empty() ? defaults : load_config(config_path);
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) set_config_value(c, key, values.at(key));
    }
    c.validate();
    return c;
  }
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
  return out;
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  for (const double d : parse_list(text, "--dims")) {
    if (d < 1 || d != std::floor(d)) throw ConfigError("--dims entries must be positive integers");
    dims.push_back(static_cast<std::size_t>(d));
  }
  if (dims.size() < 2) throw ConfigError("--dims needs at least two widths");
  return dims;
}

Dataset load_data(const ExperimentConfig& c) { return load_mnist_dir(resolve_data_dir(c.data_dir)); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw IoError("failed writing " + path.string());
}

// --- train -------------------------------------------------------------------

struct TrainArgs {
  ExperimentFlags flags;
  std::string out_dir = "run";
  unsigned dump = 0;
  bool strict = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const ExperimentConfig c = a.flags.resolve({});
  const Dataset pool = load_data(c);
  const PreparedData data = prepare_data(c, pool);
  const TrainResult r = train(c, data);

  fs::create_directories(a.out_dir);
  write_text(fs::path(a.out_dir) / "config.txt", serialize_config(c));
  write_run_csv(r.log, fs::path(a.out_dir) / "run.csv");
  save_checkpoint({r.net, c.seed, c.codec, c.codec_scale}, fs::path(a.out_dir) / "model.ckpt");
  if (!r.diverged && a.dump > 0) {
    const std::size_t n = std::min<std::size_t>(a.dump, data.eval_images.size());
    const auto recon = reconstruct(r.net, data.codec, std::span(data.eval_inputs).first(n));
    for (std::size_t i = 0; i < n; ++i) {
      write_pgm(data.eval_images[i], fs::path(a.out_dir) / ("original_" + std::to_string(i) + ".pgm"));
      write_pgm(recon[i], fs::path(a.out_dir) / ("recon_" + std::to_string(i) + ".pgm"));
    }
  }
  const RunLogRow& last = r.log.back();
  out << "epoch=" << last.epoch << " cost=" << format_double(last.cost)
      << " psnr=" << format_double(last.psnr) << " diverged=" << (r.diverged ? "true" : "false")
      << "\n";
  return r.diverged && a.strict ? kExitValidationFailure : kExitOk;
}

// --- reconstruct ---------------------------------------------------------------

struct ReconstructArgs {
  std::string checkpoint;
  std::string data_dir;
  std::string out_dir = "reconstructions";
  std::uint32_t per_class = 1;
  std::uint64_t seed = 1;
};

int cmd_reconstruct(const ReconstructArgs& a, std::ostream& out) {
  const Checkpoint ck = load_checkpoint(a.checkpoint);
  const Dataset pool = load_mnist_dir(resolve_data_dir(a.data_dir));
  const Dataset subset = sample_per_class(pool, a.per_class, a.seed);
  const RealImage& first = subset.images.front();
  const SpectrumCodec codec(ck.codec, first.height, first.width, ck.codec_scale);
  if (codec.encoded_length() != ck.net.input_dim()) {
    throw ConfigError("checkpoint input width does not match its codec");
  }
  std::vector<ComplexVector> inputs;
  for (const RealImage& img : subset.images) inputs.push_back(codec.encode(img));
  const auto recon = reconstruct(ck.net, codec, inputs);
  fs::create_directories(a.out_dir);
  for (std::size_t i = 0; i < recon.size(); ++i) {
    write_pgm(subset.images[i], fs::path(a.out_dir) / ("original_" + std::to_string(i) + ".pgm"));
    write_pgm(recon[i], fs::path(a.out_dir) / ("recon_" + std::to_string(i) + ".pgm"));
  }
  out << "images=" << recon.size() << " psnr=" << format_double(pooled_psnr(subset.images, recon)) << "\n";
  return kExitOk;
}

// --- phaseswap -----------------------------------------------------------------

struct PhaseSwapArgs {
  std::string a, b, out_dir = ".";
};

int cmd_phaseswap(const PhaseSwapArgs& args, std::ostream& out) {
  const RealImage i1 = read_pgm(args.a), i2 = read_pgm(args.b);
  const PhaseSwapResult r = phase_swap(i1, i2);
  fs::create_directories(args.out_dir);
  write_pgm(clip_unit(r.first), fs::path(args.out_dir) / "swap_a.pgm");
  write_pgm(clip_unit(r.second), fs::path(args.out_dir) / "swap_b.pgm");

  // Magnitudes come from the first image, phases from the donor.
  const ComplexVector f1 = dft2(i1), f2 = dft2(i2), g1 = dft2(r.first);
  double mag_err = 0.0, phase_err = 0.0;
  for (std::size_t k = 0; k < f1.size(); ++k) {
    mag_err = std::max(mag_err, std::abs(std::abs(g1[k]) - std::abs(f1[k])));
    if (std::abs(f1[k]) > 1e-9 && std::abs(f2[k]) > 1e-9) {
      phase_err = std::max(phase_err, std::abs(std::arg(g1[k] * std::conj(f2[k]))));
    }
  }
  out << "wrote swap_a.pgm swap_b.pgm max_magnitude_err=" << format_double(mag_err)
      << " max_phase_err=" << format_double(phase_err) << "\n";
  return kExitOk;
}

// --- gradcheck -----------------------------------------------------------------

struct GradCheckArgs {
  std::string dims = "6,4,6";
  std::string cost = "mse";
  std::string activation = "complex-arctan";
  std::string mode = "widely";
  double alpha = 1.0;
  double beta = 0.1;
  double tol = 1e-6;
  double step = kDefaultStep;
  std::uint64_t seed = 1;
  unsigned samples = 4;
};

int cmd_gradcheck(const GradCheckArgs& a, std::ostream& out) {
  const std::vector<std::size_t> dims = parse_dims(a.dims);
  if (dims.front() != dims.back()) throw ConfigError("--dims must start and end with the same width");
  ExperimentConfig c;
  c.cost = parse_cost_tag(a.cost);
  c.alpha = a.alpha;
  c.beta = a.beta;
  const CostKind cost = c.cost_kind();
  validate(cost);
  // Same rule as the config file, even for costs that ignore beta.
  if (!(a.beta > 0.0) || !std::isfinite(a.beta)) throw ConfigError("--beta must be > 0");
  if (!(a.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (a.samples == 0) throw ConfigError("--samples must be positive");

  Network net = init_xavier(dims, parse_linear_mode(a.mode), parse_activation(a.activation), a.seed);
  std::mt19937_64 gen = substream(a.seed, "gradcheck");
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (auto& layer : net.layers) {
    for (Complex& b : layer.b) b = {u(gen), u(gen)};
  }
  std::vector<ComplexVector> batch(a.samples, ComplexVector(dims.front()));
  for (auto& x : batch) {
    for (Complex& v : x) v = {2 * u(gen), 2 * u(gen)};
  }
  GradCheckOptions opt;
  opt.step = a.step;
  const GradCheckReport report = check_network_gradients(net, batch, cost, a.tol, opt);
  out << "kernels=" << kernels::active().name << " cost=" << cost_name(cost) << "\n" << report.to_text();
  return report.passed ? kExitOk : kExitValidationFailure;
}

// --- stability / sweep -----------------------------------------------------------

struct SweepArgs {
  ExperimentFlags flags;
  std::string list;
  std::string out_dir;
};

int cmd_stability(const SweepArgs& a, std::ostream& out) {
  // --hidden is the strictly linear width here; widely linear runs get half.
  ExperimentConfig defaults;
  defaults.hidden = 32;
  const ExperimentConfig base = a.flags.resolve(defaults);
  const std::vector<double> lrs = parse_list(a.list, "--lrs");
  const StabilityReport r = compare_stability(base, lrs, load_data(base), fs::path(a.out_dir));
  out << r.summary_csv();
  return kExitOk;
}

int cmd_sweep_alpha(const SweepArgs& a, std::ostream& out) {
  ExperimentConfig defaults;
  defaults.cost = CostTag::PhaseAmplitude;
  defaults.codec = CodecKind::HalfSpectrumDft;
  const ExperimentConfig base = a.flags.resolve(defaults);
  const std::vector<double> alphas = parse_list(a.list, "--alphas");
  const AlphaSweepReport r = sweep_alpha(base, alphas, load_data(base), fs::path(a.out_dir));
  out << r.summary_csv();
  return kExitOk;
}

// --- fetch-data ------------------------------------------------------------------

std::size_t append_body(char* data, std::size_t size, std::size_t n, void* user) {
  static_cast<std::string*>(user)->append(data, size * n);
  return size * n;
}

std::string download(const std::string& url) {
  CURL* curl = curl_easy_init();
  if (!curl) throw IoError("libcurl initialization failed");
  std::string body;
  curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
  curl_easy_setopt(curl, CURLOPT_CONNECTTIMEOUT, 20L);
  curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, append_body);
  curl_easy_setopt(curl, CURLOPT_WRITEDATA, &body);
  const CURLcode rc = curl_easy_perform(curl);
  curl_easy_cleanup(curl);
  if (rc != CURLE_OK) throw IoError("download of " + url + " failed: " + curl_easy_strerror(rc));
  return body;
}

std::vector<std::uint8_t> gunzip(const std::string& compressed) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw IoError("zlib initialization failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  std::vector<std::uint8_t> out;
  std::uint8_t chunk[1 << 16];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk;
    zs.avail_out = sizeof chunk;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw IoError("corrupt gzip stream");
    }
    out.insert(out.end(), chunk, chunk + (sizeof chunk - zs.avail_out));
  }
  inflateEnd(&zs);
  return out;
}

struct FetchArgs {
  std::string dir;
  std::string url = kDefaultMnistUrl;
};

int cmd_fetch(const FetchArgs& a, std::ostream& out) {
  const fs::path dir = resolve_data_dir(a.dir);
  std::string base = a.url;
  if (!base.empty() && base.back() != '/') base.push_back('/');
  curl_global_init(CURL_GLOBAL_DEFAULT);
  std::vector<std::uint8_t> images, labels;
  try {
    images = gunzip(download(base + kTrainImagesFile + std::string(".gz")));
    labels = gunzip(download(base + kTrainLabelsFile + std::string(".gz")));
  } catch (...) {
    curl_global_cleanup();
    throw;
  }
  curl_global_cleanup();
  const Dataset ds = parse_idx(images, labels);
  fs::create_directories(dir);
  auto dump = [](const std::vector<std::uint8_t>& b, const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    if (!f) throw IoError("failed writing " + p.string());
  };
  dump(images, dir / kTrainImagesFile);
  dump(labels, dir / kTrainLabelsFile);
  out << "fetched " << ds.size() << " images into " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Widely linear complex-valued autoencoder experiments", "wlcae"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train one autoencoder and write CSV, checkpoint and PGMs");
  train_args.flags.attach(train_cmd);
  train_cmd->add_option("--out", train_args.out_dir, "Output directory");
  train_cmd->add_option("--dump", train_args.dump, "Number of reconstructions to write as PGM");
  train_cmd->add_flag("--strict", train_args.strict, "Exit 1 when the run diverges");

  ReconstructArgs rec_args;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Reconstruct MNIST digits with a saved checkpoint");
  rec_cmd->add_option("--checkpoint", rec_args.checkpoint, "Checkpoint file")->required();
  rec_cmd->add_option("--data-dir", rec_args.data_dir, "MNIST IDX directory");
  rec_cmd->add_option("--out", rec_args.out_dir, "Output directory");
  rec_cmd->add_option("--samples-per-class", rec_args.per_class, "Digits per class")->check(CLI::PositiveNumber);
  rec_cmd->add_option("--seed", rec_args.seed, "Sampling seed");

  PhaseSwapArgs ps_args;
  auto* ps_cmd = app.add_subcommand("phaseswap", "Swap the DFT phases of two PGM images");
  ps_cmd->add_option("--a", ps_args.a, "First image (PGM)")->required();
  ps_cmd->add_option("--b", ps_args.b, "Second image (PGM)")->required();
  ps_cmd->add_option("--out", ps_args.out_dir, "Output directory");

  GradCheckArgs gc_args;
  auto* gc_cmd = app.add_subcommand("gradcheck", "Compare backprop against central differences");
  gc_cmd->add_option("--dims", gc_args.dims, "Layer widths, e.g. 6,4,6");
  gc_cmd->add_option("--cost", gc_args.cost, "mse|normalized-mse|phase-amplitude");
  gc_cmd->add_option("--activation", gc_args.activation, "complex-arctan|split-arctan|identity");
  gc_cmd->add_option("--mode", gc_args.mode, "strictly|widely");
  gc_cmd->add_option("--alpha", gc_args.alpha, "Phase weight");
  gc_cmd->add_option("--beta", gc_args.beta, "Normalization floor");
  gc_cmd->add_option("--tol", gc_args.tol, "Maximum relative error");
  gc_cmd->add_option("--step", gc_args.step, "Finite-difference step");
  gc_cmd->add_option("--seed", gc_args.seed, "Seed for weights and batch");
  gc_cmd->add_option("--samples", gc_args.samples, "Batch size");

  SweepArgs stab_args{{}, "0.003,0.005,0.006", "stability"};
  auto* stab_cmd = app.add_subcommand("stability", "Strictly vs widely linear training across learning rates");
  stab_args.flags.attach(stab_cmd);
  stab_cmd->add_option("--lrs", stab_args.list, "Comma-separated learning rates");
  stab_cmd->add_option("--out", stab_args.out_dir, "Output directory");

  SweepArgs alpha_args{{}, "0.5,1,2,4", "sweep-alpha"};
  auto* alpha_cmd = app.add_subcommand("sweep-alpha", "Phase-amplitude cost across phase weights");
  alpha_args.flags.attach(alpha_cmd);
  alpha_cmd->add_option("--alphas", alpha_args.list, "Comma-separated alphas");
  alpha_cmd->add_option("--out", alpha_args.out_dir, "Output directory");

  FetchArgs fetch_args;
  auto* fetch_cmd = app.add_subcommand("fetch-data", "Download MNIST training files (IDX)");
  fetch_cmd->add_option("--dir", fetch_args.dir, "Destination directory");
  fetch_cmd->add_option("--url", fetch_args.url, "Mirror base URL");

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(train_args, out);
    if (*rec_cmd) return cmd_reconstruct(rec_args, out);
    if (*ps_cmd) return cmd_phaseswap(ps_args, out);
    if (*gc_cmd) return cmd_gradcheck(gc_args, out);
    if (*stab_cmd) return cmd_stability(stab_args, out);
    if (*alpha_cmd) return cmd_sweep_alpha(alpha_args, out);
    if (*fetch_cmd) return cmd_fetch(fetch_args, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (*fetch_cmd) err << "hint: tools/fetch_mnist.py can convert an offline copy\n";
    return kExitValidationFailure;
  }
  return kExitUsage;
}

}  // namespace wlcae::cli
