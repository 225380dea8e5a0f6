#ifndef SGFIELD_RANDOM_HPP_
#define SGFIELD_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace sgfield {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive well-separated sub-stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of sub-stream `stream` of the master seed. Distinct (master, stream)
/// pairs give independent generators.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

}  // namespace sgfield

#endif  // SGFIELD_RANDOM_HPP_
