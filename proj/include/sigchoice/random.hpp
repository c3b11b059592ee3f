#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sigchoice {

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Domain tags keep the ground-truth and sampling streams disjoint.
enum class StreamDomain : std::uint64_t {
  Preferences = 1,
  Weights = 2,
  Choices = 3,
  Shuffle = 4,
};

/// Seed of the substream for cell (a, b) in a domain:
/// seed XOR hash(domain, a, b). Independent of the order cells are visited.
constexpr std::uint64_t substream_seed(std::uint64_t seed, StreamDomain domain, std::uint64_t a,
                                       std::uint64_t b = 0) noexcept {
  const std::uint64_t h =
      mix64(mix64(mix64(static_cast<std::uint64_t>(domain)) ^ a) + 0x632be59bd9b4e019ULL * (b + 1));
  return mix64(seed ^ h);
}

using Engine = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits. Written out instead of
/// std::uniform_real_distribution so draws are identical across standard libraries.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Standard exponential variate by inversion.
inline double standard_exponential(Engine& engine) { return -std::log1p(-uniform01(engine)); }

}  // namespace sigchoice
