#pragma once

// Real images, their complex encodings, the phase-swap demonstration, PSNR,
// and binary PGM I/O.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wlcae/complex_core.hpp"

namespace wlcae {

struct RealImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> pixels;  // row-major

  RealImage() = default;
  RealImage(std::size_t h, std::size_t w) : height(h), width(w), pixels(h * w, 0.0) {}
  RealImage(std::size_t h, std::size_t w, std::vector<double> p);

  double& at(std::size_t r, std::size_t c) { return pixels[r * width + c]; }
  double at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }

  friend bool operator==(const RealImage&, const RealImage&) = default;
};

enum class CodecKind { PixelPair, HalfSpectrumDft };

std::string to_string(CodecKind k);
CodecKind parse_codec_kind(const std::string& s);

/// Invertible packing of an H x W real image into a complex vector.
///
/// PixelPair: entry k = p[2k] + j p[2k+1] over row-major pixels (H*W even).
/// HalfSpectrumDft: unitary 2D DFT, columns 0..W/2 of every row kept
/// (H*(W/2+1) entries, row-major), multiplied by `scale`. Decoding rebuilds
/// the missing columns by Hermitian symmetry.
class SpectrumCodec {
 public:
  SpectrumCodec(CodecKind kind, std::size_t height, std::size_t width, double scale = 1.0);

  CodecKind kind() const noexcept { return kind_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  double scale() const noexcept { return scale_; }
  std::size_t encoded_length() const noexcept;

  ComplexVector encode(const RealImage& img) const;
  RealImage decode(std::span<const Complex> v) const;

 private:
  CodecKind kind_;
  std::size_t height_;
  std::size_t width_;
  double scale_;
};

/// Full unitary 2D DFT (1/sqrt(HW) in both directions), row-major.
ComplexVector dft2(std::span<const Complex> data, std::size_t height, std::size_t width);
ComplexVector idft2(std::span<const Complex> spectrum, std::size_t height, std::size_t width);
ComplexVector dft2(const RealImage& img);

struct PhaseSwapResult {
  RealImage first;   // |F(I1)| with the phase of F(I2)
  RealImage second;  // |F(I2)| with the phase of F(I1)
};

/// Unclipped outputs; use clip_unit() before display.
PhaseSwapResult phase_swap(const RealImage& i1, const RealImage& i2);

RealImage clip_unit(const RealImage& img);

/// 10 log10(1 / mse) in dB for peak 1.0; +infinity for identical images.
double psnr(const RealImage& reference, const RealImage& reconstruction);

/// PSNR of the pixel MSE pooled over every image pair.
double pooled_psnr(std::span<const RealImage> references, std::span<const RealImage> reconstructions);

/// Binary P5, maxval 255, header "P5\n<W> <H>\n255\n". Pixels are clipped to [0, 1].
void write_pgm(const RealImage& img, const std::filesystem::path& path);
std::string encode_pgm(const RealImage& img);
RealImage read_pgm(const std::filesystem::path& path);

}  // namespace wlcae
