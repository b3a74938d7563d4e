#pragma once

// Experiment orchestration: single training runs, strictly-vs-widely stability
// comparisons and phase-weight sweeps.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wlcae/dataio.hpp"
#include "wlcae/losses.hpp"
#include "wlcae/network.hpp"
#include "wlcae/spectra.hpp"

namespace wlcae {

enum class CostTag { Mse, NormalizedMse, PhaseAmplitude };
enum class EvalSplit { Train, HeldOut };

std::string to_string(CostTag t);
std::string to_string(EvalSplit s);
CostTag parse_cost_tag(const std::string& s);
EvalSplit parse_eval_split(const std::string& s);

struct ExperimentConfig {
  CodecKind codec = CodecKind::PixelPair;
  double codec_scale = 1.0;
  LinearMode mode = LinearMode::Widely;
  std::uint32_t hidden = 16;
  Activation activation = Activation::ComplexArctan;
  CostTag cost = CostTag::Mse;
  double alpha = 1.0;
  double beta = 0.1;
  double learning_rate = 0.003;
  std::uint32_t epochs = 500;
  std::uint64_t seed = 1;
  std::uint32_t samples_per_class = 50;
  EvalSplit eval = EvalSplit::Train;
  std::uint32_t log_every = 50;
  std::uint32_t batch_size = 1;  // 0 = full batch
  InitScheme init_scheme = InitScheme::SharedStream;
  std::string data_dir;          // empty: $WLCAE_DATA_DIR or data/mnist

  CostKind cost_kind() const;
  /// Throws ConfigError on any out-of-range field.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Ordered (key, value) view; keys double as CLI flag names.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c);

/// Assigns one key; throws ConfigError for unknown keys or malformed values.
void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value);

/// "key = value" lines, '#' comments allowed.
std::string serialize_config(const ExperimentConfig& c);
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Encoded training and evaluation sets for one configuration.
struct PreparedData {
  SpectrumCodec codec;
  std::vector<RealImage> train_images;
  std::vector<ComplexVector> train_inputs;
  std::vector<RealImage> eval_images;
  std::vector<ComplexVector> eval_inputs;
};

PreparedData prepare_data(const ExperimentConfig& c, const Dataset& pool);

struct TrainResult {
  Network net;
  RunLog log;
  bool diverged = false;
};

/// Gradient descent over the prepared samples in fixed order, `batch_size`
/// samples per update. Logs cost and PSNR of the state after `epoch` epochs
/// at epoch 0, every `log_every` epochs and at the end. A non-finite forward
/// pass or a cost above 1e12 ends the run with a diverged row.
TrainResult train(const ExperimentConfig& c, const PreparedData& data);
TrainResult train(const ExperimentConfig& c, const Dataset& pool);

/// Cost (mean per-sample) and pooled PSNR on a sample set.
struct Evaluation {
  double cost = 0.0;
  double psnr = 0.0;
};
Evaluation evaluate(const Network& net, const CostKind& cost, const SpectrumCodec& codec,
                    std::span<const ComplexVector> inputs, std::span<const RealImage> images);

std::vector<RealImage> reconstruct(const Network& net, const SpectrumCodec& codec,
                                   std::span<const ComplexVector> inputs);

/// Widely linear hidden width with the same weight count as a strictly linear
/// model of width `hidden_strict`.
std::uint32_t match_parameter_counts(std::size_t input_dim, std::uint32_t hidden_strict);

/// Diverged, or the cost rebounded more than 1% above its running minimum.
bool is_unstable(const RunLog& log);

struct StabilityRun {
  double learning_rate = 0.0;
  std::string variant;  // strictly-pixel-pair | widely-pixel-pair | widely-dft
  ExperimentConfig config;
  TrainResult result;
  bool unstable = false;
};

struct StabilityReport {
  std::vector<StabilityRun> runs;
  std::string summary_csv() const;
};

/// For each learning rate trains the strictly linear pixel-pair model (width
/// base.hidden), and widely linear pixel-pair and DFT models at the matched
/// width. Writes one CSV per run plus summary.csv when out_dir is set.
StabilityReport compare_stability(const ExperimentConfig& base, std::span<const double> lrs,
                                  const Dataset& pool,
                                  const std::optional<std::filesystem::path>& out_dir = {});

struct AlphaSweepEntry {
  double alpha = 0.0;
  TrainResult result;
};

struct AlphaSweepReport {
  std::vector<AlphaSweepEntry> entries;
  std::string summary_csv() const;
};

AlphaSweepReport sweep_alpha(const ExperimentConfig& base, std::span<const double> alphas,
                             const Dataset& pool,
                             const std::optional<std::filesystem::path>& out_dir = {});

std::string stability_run_name(const StabilityRun& r);

}  // namespace wlcae
