#pragma once

// MNIST IDX ingestion, stratified subsampling and run-log CSV files.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wlcae/spectra.hpp"

namespace wlcae {

struct Dataset {
  std::vector<RealImage> images;
  std::vector<std::uint8_t> labels;

  std::size_t size() const noexcept { return images.size(); }
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

inline constexpr const char* kTrainImagesFile = "train-images-idx3-ubyte";
inline constexpr const char* kTrainLabelsFile = "train-labels-idx1-ubyte";

/// Parses big-endian IDX image/label files of 28x28 digits; pixels are divided by 255.
Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path);

/// Same parser over in-memory bytes.
Dataset parse_idx(const std::vector<std::uint8_t>& image_bytes,
                  const std::vector<std::uint8_t>& label_bytes);

/// Serializes to IDX (pixels rounded to the nearest 1/255).
std::vector<std::uint8_t> encode_idx_images(const Dataset& ds);
std::vector<std::uint8_t> encode_idx_labels(const Dataset& ds);
void save_idx(const Dataset& ds, const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path);

/// Loads <dir>/train-images-idx3-ubyte and <dir>/train-labels-idx1-ubyte.
Dataset load_mnist_dir(const std::filesystem::path& dir);

/// Data directory: the explicit value if non-empty, else $WLCAE_DATA_DIR, else "data/mnist".
std::filesystem::path resolve_data_dir(const std::string& explicit_dir);

/// Exactly n images of every label present, drawn without replacement. Output
/// order is a seeded shuffle of the selection.
Dataset sample_per_class(const Dataset& ds, std::uint32_t n_per_class, std::uint64_t seed);

/// Two disjoint stratified samples: `first` with n_first per class and
/// `second` with n_second per class.
std::pair<Dataset, Dataset> sample_disjoint(const Dataset& ds, std::uint32_t n_first,
                                            std::uint32_t n_second, std::uint64_t seed);

struct RunLogRow {
  std::uint32_t epoch = 0;
  double cost = 0.0;
  double psnr = 0.0;
  bool diverged = false;

  friend bool operator==(const RunLogRow&, const RunLogRow&) = default;
};

class RunLog {
 public:
  /// Throws std::invalid_argument unless epochs strictly increase.
  void add(const RunLogRow& row);
  const std::vector<RunLogRow>& rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }
  const RunLogRow& back() const { return rows_.back(); }

  friend bool operator==(const RunLog&, const RunLog&) = default;

 private:
  std::vector<RunLogRow> rows_;
};

/// Header "epoch,cost,psnr,diverged"; doubles with 17 significant digits.
std::string format_run_csv(const RunLog& log);
void write_run_csv(const RunLog& log, const std::filesystem::path& path);
RunLog read_run_csv(const std::filesystem::path& path);

/// %.17g rendering used by every CSV writer.
std::string format_double(double v);

}  // namespace wlcae
