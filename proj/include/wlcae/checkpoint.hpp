#pragma once

// Versioned binary model checkpoints. Layout is documented in docs/FORMATS.md.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wlcae/network.hpp"
#include "wlcae/spectra.hpp"

namespace wlcae {

inline constexpr char kCheckpointMagic[8] = {'W', 'L', 'C', 'A', 'E', 'C', 'K', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Network net;
  std::uint64_t seed = 0;
  CodecKind codec = CodecKind::PixelPair;
  double codec_scale = 1.0;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ck);
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace wlcae
