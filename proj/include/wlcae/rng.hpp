#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace wlcae {

/// Independent generator for a named purpose ("init", "sampling", ...) derived
/// from one experiment seed. Same (seed, name) always yields the same stream.
inline std::mt19937_64 substream(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (const char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace wlcae
