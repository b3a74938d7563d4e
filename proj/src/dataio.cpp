#include "wlcae/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "wlcae/errors.hpp"
#include "wlcae/rng.hpp"

namespace wlcae {
namespace {

using Bytes = std::vector<std::uint8_t>;

constexpr std::uint32_t kIdxSide = 28;

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError(ParseError::Kind::Io, 0, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

std::uint32_t read_be32(const Bytes& b, std::size_t offset, const char* what) {
  if (offset + 4 > b.size()) {
    throw ParseError(ParseError::Kind::Truncated, offset,
                     std::string(what) + ": truncated header at byte " + std::to_string(offset));
  }
  return (std::uint32_t{b[offset]} << 24) | (std::uint32_t{b[offset + 1]} << 16) |
         (std::uint32_t{b[offset + 2]} << 8) | std::uint32_t{b[offset + 3]};
}

void put_be32(Bytes& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 24));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

}  // namespace

Dataset parse_idx(const Bytes& image_bytes, const Bytes& label_bytes) {
  const std::uint32_t img_magic = read_be32(image_bytes, 0, "image file");
  if (img_magic != kIdxImageMagic) {
    throw ParseError(ParseError::Kind::BadMagic, 0,
                     "image file: bad magic " + hex32(img_magic) + " at byte 0");
  }
  const std::uint32_t count = read_be32(image_bytes, 4, "image file");
  const std::uint32_t rows = read_be32(image_bytes, 8, "image file");
  const std::uint32_t cols = read_be32(image_bytes, 12, "image file");
  if (rows != kIdxSide || cols != kIdxSide) {
    throw ParseError(ParseError::Kind::BadDimensions, 8,
                     "image file: images are " + std::to_string(rows) + "x" + std::to_string(cols) +
                         ", expected 28x28 (byte 8)");
  }
  const std::size_t pixels = std::size_t{rows} * cols;
  const std::size_t need = 16 + std::size_t{count} * pixels;
  if (image_bytes.size() < need) {
    throw ParseError(ParseError::Kind::Truncated, image_bytes.size(),
                     "image file: truncated at byte " + std::to_string(image_bytes.size()) +
                         ", expected " + std::to_string(need));
  }

  const std::uint32_t lbl_magic = read_be32(label_bytes, 0, "label file");
  if (lbl_magic != kIdxLabelMagic) {
    throw ParseError(ParseError::Kind::BadMagic, 0,
                     "label file: bad magic " + hex32(lbl_magic) + " at byte 0");
  }
  const std::uint32_t lcount = read_be32(label_bytes, 4, "label file");
  if (lcount != count) {
    throw ParseError(ParseError::Kind::CountMismatch, 4,
                     "label file: " + std::to_string(lcount) + " labels for " +
                         std::to_string(count) + " images (byte 4)");
  }
  if (label_bytes.size() < 8 + std::size_t{count}) {
    throw ParseError(ParseError::Kind::Truncated, label_bytes.size(),
                     "label file: truncated at byte " + std::to_string(label_bytes.size()));
  }

  for (std::size_t i = 0; i < count; ++i) {
    if (label_bytes[8 + i] > 9) {
      throw ParseError(ParseError::Kind::BadLabel, 8 + i,
                       "label file: label " + std::to_string(label_bytes[8 + i]) + " at byte " +
                           std::to_string(8 + i) + " is not a digit");
    }
  }

  Dataset ds;
  ds.images.reserve(count);
  ds.labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RealImage img(rows, cols);
    const std::uint8_t* src = image_bytes.data() + 16 + i * pixels;
    for (std::size_t k = 0; k < pixels; ++k) img.pixels[k] = src[k] / 255.0;
    ds.images.push_back(std::move(img));
    ds.labels.push_back(label_bytes[8 + i]);
  }
  return ds;
}

Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
  const Bytes images = read_file(images_path);
  return parse_idx(images, read_file(labels_path));
}

Bytes encode_idx_images(const Dataset& ds) {
  Bytes b;
  const std::size_t rows = ds.images.empty() ? 28 : ds.images.front().height;
  const std::size_t cols = ds.images.empty() ? 28 : ds.images.front().width;
  put_be32(b, kIdxImageMagic);
  put_be32(b, static_cast<std::uint32_t>(ds.images.size()));
  put_be32(b, static_cast<std::uint32_t>(rows));
  put_be32(b, static_cast<std::uint32_t>(cols));
  for (const RealImage& img : ds.images) {
    if (img.height != rows || img.width != cols) throw ShapeError("IDX images must share dimensions");
    for (const double p : img.pixels) {
      b.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0)));
    }
  }
  return b;
}

Bytes encode_idx_labels(const Dataset& ds) {
  Bytes b;
  put_be32(b, kIdxLabelMagic);
  put_be32(b, static_cast<std::uint32_t>(ds.labels.size()));
  b.insert(b.end(), ds.labels.begin(), ds.labels.end());
  return b;
}

void save_idx(const Dataset& ds, const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path) {
  auto dump = [](const Bytes& b, const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot open " + p.string() + " for writing");
    f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    if (!f) throw IoError("failed writing " + p.string());
  };
  dump(encode_idx_images(ds), images_path);
  dump(encode_idx_labels(ds), labels_path);
}

Dataset load_mnist_dir(const std::filesystem::path& dir) {
  return load_idx(dir / kTrainImagesFile, dir / kTrainLabelsFile);
}

std::filesystem::path resolve_data_dir(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("WLCAE_DATA_DIR"); env && *env) return env;
  return "data/mnist";
}

// --- sampling ------------------------------------------------------------------

namespace {

std::map<std::uint8_t, std::vector<std::size_t>> by_class(const Dataset& ds) {
  if (ds.images.size() != ds.labels.size()) throw DataError("dataset images/labels length mismatch");
  std::map<std::uint8_t, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < ds.labels.size(); ++i) classes[ds.labels[i]].push_back(i);
  return classes;
}

Dataset gather(const Dataset& ds, const std::vector<std::size_t>& idx) {
  Dataset out;
  out.images.reserve(idx.size());
  out.labels.reserve(idx.size());
  for (const std::size_t i : idx) {
    out.images.push_back(ds.images[i]);
    out.labels.push_back(ds.labels[i]);
  }
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> sample_disjoint(const Dataset& ds, std::uint32_t n_first,
                                            std::uint32_t n_second, std::uint64_t seed) {
  auto classes = by_class(ds);
  std::mt19937_64 gen = substream(seed, "sampling");
  std::vector<std::size_t> first, second;
  for (auto& [label, members] : classes) {
    if (members.size() < std::size_t{n_first} + n_second) {
      throw DataError("class " + std::to_string(label) + " has " + std::to_string(members.size()) +
                      " members, need " + std::to_string(std::size_t{n_first} + n_second));
    }
    std::shuffle(members.begin(), members.end(), gen);
    first.insert(first.end(), members.begin(), members.begin() + n_first);
    second.insert(second.end(), members.begin() + n_first, members.begin() + n_first + n_second);
  }
  std::shuffle(first.begin(), first.end(), gen);
  std::shuffle(second.begin(), second.end(), gen);
  return {gather(ds, first), gather(ds, second)};
}

Dataset sample_per_class(const Dataset& ds, std::uint32_t n_per_class, std::uint64_t seed) {
  return sample_disjoint(ds, n_per_class, 0, seed).first;
}

// --- run log -------------------------------------------------------------------

void RunLog::add(const RunLogRow& row) {
  if (!rows_.empty() && row.epoch <= rows_.back().epoch) {
    throw std::invalid_argument("run log epochs must strictly increase (got " +
                                std::to_string(row.epoch) + " after " +
                                std::to_string(rows_.back().epoch) + ")");
  }
  rows_.push_back(row);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_run_csv(const RunLog& log) {
  std::string out = "epoch,cost,psnr,diverged\n";
  for (const RunLogRow& r : log.rows()) {
    out += std::to_string(r.epoch) + "," + format_double(r.cost) + "," + format_double(r.psnr) + "," +
           (r.diverged ? "true" : "false") + "\n";
  }
  return out;
}

void write_run_csv(const RunLog& log, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << format_run_csv(log);
  if (!f) throw IoError("failed writing " + path.string());
}

RunLog read_run_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != "epoch,cost,psnr,diverged") {
    throw IoError(path.string() + ": missing run-log header");
  }
  RunLog log;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 4 fields");
    RunLogRow r;
    r.epoch = static_cast<std::uint32_t>(std::stoul(cells[0]));
    r.cost = std::strtod(cells[1].c_str(), nullptr);
    r.psnr = std::strtod(cells[2].c_str(), nullptr);
    if (cells[3] != "true" && cells[3] != "false") {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": diverged must be true|false");
    }
    r.diverged = cells[3] == "true";
    log.add(r);
  }
  return log;
}

}  // namespace wlcae
