#pragma once

#include <cstdint>
#include <random>

namespace betaframe {

// Recorded in experiment manifests; determinism is promised within one
// build of one toolchain, not across standard libraries.
inline constexpr const char* kGeneratorName =
    "mt19937_64 + std::normal_distribution<double>";

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Counter-based stream split: independent seed for trial `index` of domain
/// `tag`, so parallel trial loops stay deterministic regardless of schedule.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t index = 0) {
  return mix64(mix64(master + kGolden * (tag + 1)) + kGolden * (index + 1));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

}  // namespace betaframe
