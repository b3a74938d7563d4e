#include "wlcae/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "wlcae/errors.hpp"

namespace wlcae {
namespace {

using Bytes = std::vector<std::uint8_t>;

void put_u32(Bytes& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(Bytes& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(Bytes& b, double v) { put_u64(b, std::bit_cast<std::uint64_t>(v)); }

void put_complex(Bytes& b, std::span<const Complex> v) {
  for (const Complex& c : v) {
    put_f64(b, c.real());
    put_f64(b, c.imag());
  }
}

class Reader {
 public:
  explicit Reader(const Bytes& b) : b_(b) {}

  std::uint64_t u64() { return read(8); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(read(4)); }
  double f64() { return std::bit_cast<double>(u64()); }
  void complex(std::span<Complex> out) {
    for (Complex& c : out) {
      const double re = f64();
      c = {re, f64()};
    }
  }
  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ == b_.size(); }

 private:
  std::uint64_t read(int n) {
    if (pos_ + static_cast<std::size_t>(n) > b_.size()) {
      throw ParseError(ParseError::Kind::Truncated, pos_,
                       "checkpoint truncated at byte " + std::to_string(pos_));
    }
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{b_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  const Bytes& b_;
  std::size_t pos_ = 0;
};

std::uint32_t activation_tag(Activation a) { return static_cast<std::uint32_t>(a); }

Activation activation_from_tag(std::uint32_t t, std::size_t offset) {
  if (t > 2) throw ParseError(ParseError::Kind::BadDimensions, offset, "unknown activation tag");
  return static_cast<Activation>(t);
}

}  // namespace

Bytes encode_checkpoint(const Checkpoint& ck) {
  ck.net.check();
  Bytes b(std::begin(kCheckpointMagic), std::end(kCheckpointMagic));
  put_u32(b, kCheckpointVersion);
  put_u32(b, ck.net.mode == LinearMode::Widely ? 1 : 0);
  put_u32(b, static_cast<std::uint32_t>(ck.net.layers.size()));
  for (const std::size_t d : ck.net.dims()) put_u64(b, d);
  for (const Activation a : ck.net.activations) put_u32(b, activation_tag(a));
  put_u64(b, ck.seed);
  put_u32(b, ck.codec == CodecKind::PixelPair ? 0 : 1);
  put_f64(b, ck.codec_scale);
  for (const LayerParams& p : ck.net.layers) {
    put_complex(b, p.w1.data());
    put_complex(b, p.w2.data());
    put_complex(b, p.b);
  }
  return b;
}

Checkpoint decode_checkpoint(const Bytes& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kCheckpointMagic, 8) != 0) {
    throw ParseError(ParseError::Kind::BadMagic, 0, "not a checkpoint (bad magic)");
  }
  Bytes body(bytes.begin() + 8, bytes.end());
  Reader r(body);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw ParseError(ParseError::Kind::BadMagic, 8,
                     "unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ck;
  const std::uint32_t mode = r.u32();
  if (mode > 1) throw ParseError(ParseError::Kind::BadDimensions, 12, "unknown linear mode");
  ck.net.mode = mode == 1 ? LinearMode::Widely : LinearMode::Strictly;
  const std::uint32_t layers = r.u32();
  if (layers == 0 || layers > 1024) {
    throw ParseError(ParseError::Kind::BadDimensions, 16, "implausible layer count");
  }
  std::vector<std::size_t> dims(layers + 1);
  for (std::size_t& d : dims) {
    d = r.u64();
    if (d == 0 || d > (1u << 20)) {
      throw ParseError(ParseError::Kind::BadDimensions, 8 + r.offset(), "implausible layer width");
    }
  }
  for (std::uint32_t l = 0; l < layers; ++l) {
    ck.net.activations.push_back(activation_from_tag(r.u32(), 8 + r.offset()));
  }
  ck.seed = r.u64();
  const std::uint32_t codec = r.u32();
  if (codec > 1) throw ParseError(ParseError::Kind::BadDimensions, 8 + r.offset(), "unknown codec tag");
  ck.codec = codec == 0 ? CodecKind::PixelPair : CodecKind::HalfSpectrumDft;
  ck.codec_scale = r.f64();
  for (std::uint32_t l = 0; l < layers; ++l) {
    LayerParams p{ComplexMatrix(dims[l + 1], dims[l]), ComplexMatrix(dims[l + 1], dims[l]),
                  ComplexVector(dims[l + 1])};
    r.complex(p.w1.data());
    r.complex(p.w2.data());
    r.complex(p.b);
    ck.net.layers.push_back(std::move(p));
  }
  if (!r.at_end()) {
    throw ParseError(ParseError::Kind::CountMismatch, 8 + r.offset(), "trailing bytes after checkpoint");
  }
  try {
    ck.net.check();
  } catch (const std::exception& e) {
    throw ParseError(ParseError::Kind::BadDimensions, 0, std::string("invalid checkpoint: ") + e.what());
  }
  return ck;
}

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  const Bytes b = encode_checkpoint(ck);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  if (!f) throw IoError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  const Bytes b((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_checkpoint(b);
}

}  // namespace wlcae
