#include <gtest/gtest.h>

#include <filesystem>

#include "wlcae/checkpoint.hpp"
#include "wlcae/errors.hpp"

namespace wlcae {
namespace {

Checkpoint sample_checkpoint() {
  Checkpoint ck;
  ck.net = init_xavier(std::vector<std::size_t>{6, 4, 6}, LinearMode::Widely, Activation::SplitArctan, 17);
  ck.net.layers[1].b[2] = {-0.125, 3.5};
  ck.seed = 0x1234567890abcdefULL;
  ck.codec = CodecKind::HalfSpectrumDft;
  ck.codec_scale = 0.25;
  return ck;
}

TEST(Checkpoint, BytesRoundTrip) {
  const Checkpoint ck = sample_checkpoint();
  EXPECT_EQ(decode_checkpoint(encode_checkpoint(ck)), ck);
}

TEST(Checkpoint, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "wlcae_test_checkpoint.bin";
  Checkpoint ck = sample_checkpoint();
  ck.net.mode = LinearMode::Strictly;
  for (auto& l : ck.net.layers) l.w2 = ComplexMatrix(l.w2.rows(), l.w2.cols());
  save_checkpoint(ck, path);
  EXPECT_EQ(load_checkpoint(path), ck);
  std::filesystem::remove(path);
}

TEST(Checkpoint, HeaderLayout) {
  const std::vector<std::uint8_t> bytes = encode_checkpoint(sample_checkpoint());
  ASSERT_GE(bytes.size(), 16u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 7), "WLCAECK");
  EXPECT_EQ(bytes[7], 0);
  EXPECT_EQ(bytes[8], 1);  // version 1, little-endian u32
  EXPECT_EQ(bytes[12], 1);  // widely
  // header 24 + dims 3*8 + tags 2*4 + seed 8 + codec 4 + scale 8, then 2 * 16 bytes per complex
  const std::size_t complexes = 2 * (4 * 6) * 2 + 4 + 6;
  EXPECT_EQ(bytes.size(), 20u + 24u + 8u + 8u + 4u + 8u + 16u * complexes);
}

ParseError::Kind parse_kind(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_checkpoint(bytes);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "corrupted checkpoint decoded without error";
  return ParseError::Kind::Io;
}

TEST(Checkpoint, RejectsCorruption) {
  const std::vector<std::uint8_t> bytes = encode_checkpoint(sample_checkpoint());
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(parse_kind(bad_magic), ParseError::Kind::BadMagic);
  auto bad_version = bytes;
  bad_version[8] = 9;
  EXPECT_EQ(parse_kind(bad_version), ParseError::Kind::BadMagic);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 1);
  EXPECT_EQ(parse_kind(truncated), ParseError::Kind::Truncated);
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_EQ(parse_kind(trailing), ParseError::Kind::CountMismatch);
  auto bad_mode = bytes;
  bad_mode[12] = 7;
  EXPECT_EQ(parse_kind(bad_mode), ParseError::Kind::BadDimensions);
  EXPECT_THROW(load_checkpoint("/nonexistent/wlcae.ckpt"), IoError);
}

}  // namespace
}  // namespace wlcae
