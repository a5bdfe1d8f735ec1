#pragma once

#include <cstdint>

namespace layercache {

// SplitMix64 finalizer; used to expand one top-level seed into independent
// per-purpose seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed streams. The splitting rule is
//   derive_seed(seed, stream, index) = splitmix64(splitmix64(seed ^ stream_tag) + index)
// and it is part of the reproducibility contract of experiment configs.
enum class SeedStream : std::uint64_t {
  kCatalog = 0x636174616C6F6700ULL,  // "catalog"
  kTrace = 0x7472616365000000ULL,    // "trace"
  kMonteCarlo = 0x6D6F6E7465000000ULL,
};

constexpr std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream,
                                    std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed ^ static_cast<std::uint64_t>(stream)) + index);
}

}  // namespace layercache
