#pragma once

#include <cstdint>
#include <string_view>

// Counter-based random number generation.
//
// Every random decision in this project is a pure function of
// (seed, stream label, item index, slot): there is no mutable generator
// state, so work can be split across any number of threads in any order
// and still produce bit-identical results. Streams are separated by
// hashing a human-readable label into the key, which also documents where
// each consumer's randomness comes from ("zipf", "confusion", ...).

namespace modality::rng {

// Finalizer from splitmix64 (Steele, Lea & Flood). Bijective on 64 bits.
inline constexpr uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

inline constexpr uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Key for a named stream under a user seed. Distinct labels give
// decorrelated streams for the same seed.
inline constexpr uint64_t stream_key(uint64_t seed, std::string_view label) {
  return mix64(seed ^ (0x9E3779B97F4A7C15ULL + fnv1a64(label)));
}

// The index-th item's slot-th raw draw from a stream. Two mixing rounds so
// that neither index nor slot structure survives into the output.
inline constexpr uint64_t draw(uint64_t key, uint64_t index, uint64_t slot) {
  uint64_t h =
      mix64(key ^ (index * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL));
  return mix64(h ^ (slot * 0xD6E8FEB86659FD93ULL + 0x632BE59BD9B4E019ULL));
}

// Uniform double in [0, 1) built from the top 53 bits of a draw.
inline double uniform01(uint64_t key, uint64_t index, uint64_t slot) {
  return static_cast<double>(draw(key, index, slot) >> 11) * 0x1.0p-53;
}

}  // namespace modality::rng
