#include "wlcae/spectra.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>

#include "wlcae/errors.hpp"

namespace wlcae {

RealImage::RealImage(std::size_t h, std::size_t w, std::vector<double> p)
    : height(h), width(w), pixels(std::move(p)) {
  if (pixels.size() != h * w) throw ShapeError("image pixel count does not match its dimensions");
}

std::string to_string(CodecKind k) { return k == CodecKind::PixelPair ? "pixel-pair" : "dft"; }

CodecKind parse_codec_kind(const std::string& s) {
  if (s == "pixel-pair") return CodecKind::PixelPair;
  if (s == "dft") return CodecKind::HalfSpectrumDft;
  throw ConfigError("unknown codec '" + s + "' (pixel-pair|dft)");
}

// --- DFT -------------------------------------------------------------------

namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1)))) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

ComplexVector transform(std::span<const Complex> data, std::size_t height, std::size_t width,
                        int sign) {
  const std::size_t n = height * width;
  if (data.size() != n) throw ShapeError("DFT input length does not match dimensions");
  if (n == 0) return {};
  FftwBuffer in(n), out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), in.ptr, out.ptr,
                            sign, FFTW_ESTIMATE);
  }
  std::memcpy(in.ptr, data.data(), sizeof(fftw_complex) * n);
  fftw_execute(plan);
  ComplexVector result(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) result[k] = Complex(out.ptr[k][0], out.ptr[k][1]) * norm;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return result;
}

void require_dims(const RealImage& img, std::size_t h, std::size_t w, const char* what) {
  if (img.height != h || img.width != w) {
    throw ShapeError(std::string(what) + ": image is " + std::to_string(img.height) + "x" +
                     std::to_string(img.width) + ", expected " + std::to_string(h) + "x" +
                     std::to_string(w));
  }
}

}  // namespace

ComplexVector dft2(std::span<const Complex> data, std::size_t height, std::size_t width) {
  return transform(data, height, width, FFTW_FORWARD);
}

ComplexVector idft2(std::span<const Complex> spectrum, std::size_t height, std::size_t width) {
  return transform(spectrum, height, width, FFTW_BACKWARD);
}

ComplexVector dft2(const RealImage& img) {
  ComplexVector c(img.pixels.begin(), img.pixels.end());
  return dft2(c, img.height, img.width);
}

// --- codec -----------------------------------------------------------------

SpectrumCodec::SpectrumCodec(CodecKind kind, std::size_t height, std::size_t width, double scale)
    : kind_(kind), height_(height), width_(width), scale_(scale) {
  if (height == 0 || width == 0) throw ConfigError("codec dimensions must be positive");
  if (kind == CodecKind::PixelPair && (height * width) % 2 != 0) {
    throw ConfigError("pixel-pair codec needs an even pixel count");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("codec scale must be positive");
}

std::size_t SpectrumCodec::encoded_length() const noexcept {
  return kind_ == CodecKind::PixelPair ? height_ * width_ / 2 : height_ * (width_ / 2 + 1);
}

ComplexVector SpectrumCodec::encode(const RealImage& img) const {
  require_dims(img, height_, width_, "encode");
  if (kind_ == CodecKind::PixelPair) {
    ComplexVector v(encoded_length());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = {img.pixels[2 * k], img.pixels[2 * k + 1]};
    return v;
  }
  const ComplexVector full = dft2(img);
  const std::size_t kept = width_ / 2 + 1;
  ComplexVector v(encoded_length());
  for (std::size_t h = 0; h < height_; ++h) {
    for (std::size_t w = 0; w < kept; ++w) v[h * kept + w] = full[h * width_ + w] * scale_;
  }
  return v;
}

RealImage SpectrumCodec::decode(std::span<const Complex> v) const {
  if (v.size() != encoded_length()) {
    throw ShapeError("decode: vector has " + std::to_string(v.size()) + " entries, codec expects " +
                     std::to_string(encoded_length()));
  }
  RealImage img(height_, width_);
  if (kind_ == CodecKind::PixelPair) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      img.pixels[2 * k] = v[k].real();
      img.pixels[2 * k + 1] = v[k].imag();
    }
    return img;
  }
  const std::size_t kept = width_ / 2 + 1;
  ComplexVector full(height_ * width_);
  for (std::size_t h = 0; h < height_; ++h) {
    for (std::size_t w = 0; w < kept; ++w) full[h * width_ + w] = v[h * kept + w] / scale_;
  }
  for (std::size_t h = 0; h < height_; ++h) {
    for (std::size_t w = kept; w < width_; ++w) {
      const std::size_t mh = (height_ - h) % height_, mw = width_ - w;
      full[h * width_ + w] = std::conj(full[mh * width_ + mw]);
    }
  }
  // The real part equals the inverse of the Hermitian-symmetrized spectrum.
  const ComplexVector spatial = idft2(full, height_, width_);
  for (std::size_t k = 0; k < spatial.size(); ++k) img.pixels[k] = spatial[k].real();
  return img;
}

// --- phase swap --------------------------------------------------------------

PhaseSwapResult phase_swap(const RealImage& i1, const RealImage& i2) {
  require_dims(i2, i1.height, i1.width, "phase_swap");
  const ComplexVector f1 = dft2(i1), f2 = dft2(i2);
  ComplexVector g1(f1.size()), g2(f2.size());
  for (std::size_t k = 0; k < f1.size(); ++k) {
    g1[k] = std::polar(std::abs(f1[k]), std::arg(f2[k]));
    g2[k] = std::polar(std::abs(f2[k]), std::arg(f1[k]));
  }
  const ComplexVector s1 = idft2(g1, i1.height, i1.width);
  const ComplexVector s2 = idft2(g2, i1.height, i1.width);
  PhaseSwapResult r{RealImage(i1.height, i1.width), RealImage(i1.height, i1.width)};
  for (std::size_t k = 0; k < s1.size(); ++k) {
    r.first.pixels[k] = s1[k].real();
    r.second.pixels[k] = s2[k].real();
  }
  return r;
}

RealImage clip_unit(const RealImage& img) {
  RealImage out = img;
  for (double& p : out.pixels) p = std::clamp(p, 0.0, 1.0);
  return out;
}

// --- PSNR --------------------------------------------------------------------

namespace {

double psnr_from_mse(double mse) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace

double psnr(const RealImage& reference, const RealImage& reconstruction) {
  require_dims(reconstruction, reference.height, reference.width, "psnr");
  double sum = 0.0;
  for (std::size_t k = 0; k < reference.pixels.size(); ++k) {
    const double d = reference.pixels[k] - reconstruction.pixels[k];
    sum += d * d;
  }
  return psnr_from_mse(sum / static_cast<double>(reference.pixels.size()));
}

double pooled_psnr(std::span<const RealImage> references,
                   std::span<const RealImage> reconstructions) {
  if (references.size() != reconstructions.size() || references.empty()) {
    throw ShapeError("pooled_psnr needs equally many (>0) references and reconstructions");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    const RealImage& a = references[i];
    const RealImage& b = reconstructions[i];
    require_dims(b, a.height, a.width, "pooled_psnr");
    for (std::size_t k = 0; k < a.pixels.size(); ++k) {
      const double d = a.pixels[k] - b.pixels[k];
      sum += d * d;
    }
    count += a.pixels.size();
  }
  return psnr_from_mse(sum / static_cast<double>(count));
}

// --- PGM -----------------------------------------------------------------------

std::string encode_pgm(const RealImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.pixels.size());
  for (const double p : img.pixels) {
    const double v = std::isfinite(p) ? std::clamp(p, 0.0, 1.0) : 0.0;
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
  return out;
}

void write_pgm(const RealImage& img, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  const std::string bytes = encode_pgm(img);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("failed writing " + path.string());
}

RealImage read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  auto next_token = [&]() {
    std::string tok;
    char c;
    while (f.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(f, skip);
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        tok.push_back(c);
        break;
      }
    }
    while (f.get(c) && !std::isspace(static_cast<unsigned char>(c))) tok.push_back(c);
    return tok;
  };
  if (next_token() != "P5") throw IoError(path.string() + ": not a binary PGM (P5)");
  std::size_t w = 0, h = 0, maxval = 0;
  try {
    w = std::stoul(next_token());
    h = std::stoul(next_token());
    maxval = std::stoul(next_token());
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed PGM header");
  }
  if (maxval == 0 || maxval > 255) throw IoError(path.string() + ": only 8-bit PGM is supported");
  std::vector<unsigned char> raw(w * h);
  f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(f.gcount()) != raw.size()) throw IoError(path.string() + ": truncated PGM");
  RealImage img(h, w);
  for (std::size_t k = 0; k < raw.size(); ++k) img.pixels[k] = raw[k] / static_cast<double>(maxval);
  return img;
}

}  // namespace wlcae
