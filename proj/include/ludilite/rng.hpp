#pragma once

#include <cstdint>
#include <string_view>

namespace ludilite {

/// SplitMix64 (Steele, Lea & Flood 2014), the generator behind Java's
/// SplittableRandom and the seeder recommended for the xoshiro family.
///
/// Reference sequence for seed 1234567:
///   6457827717110365317, 3203168211198807973, 9817491932198370423,
///   4593380528125082431, 16408922859458223821
///
/// Every draw used by playouts goes through `bounded`, which is defined here
/// rather than through <random> distributions so that traces are identical
/// across standard libraries.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n) by rejection of the biased low range. n > 0.
  constexpr std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// 64-bit FNV-1a over the raw bytes.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

/// Base seed for a batch of playouts over `text`, salted by a user seed.
constexpr std::uint64_t content_seed(std::string_view text, std::uint64_t salt) {
  SplitMix64 mix(fnv1a64(text) ^ salt);
  return mix.next();
}

}  // namespace ludilite
