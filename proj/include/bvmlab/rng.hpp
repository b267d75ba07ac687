#pragma once

#include <cstdint>
#include <random>

namespace bvmlab {

/// Finalizer from the splitmix64 generator; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a master seed and a path of integer ids.
/// Streams derived along distinct paths are statistically independent,
/// which is what makes replicate-level parallelism order-insensitive:
/// worker count never touches the seed path.
template <typename... Ids>
std::uint64_t derive_seed(std::uint64_t master, Ids... ids) {
  std::uint64_t h = mix64(master);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(ids)))), ...);
  return h;
}

template <typename... Ids>
std::mt19937_64 make_engine(std::uint64_t master, Ids... ids) {
  return std::mt19937_64(derive_seed(master, ids...));
}

} // namespace bvmlab
