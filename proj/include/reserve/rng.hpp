#pragma once

#include <cstdint>
#include <random>

namespace reserve {

// splitmix64 step; used only to derive seeds for mt19937_64 streams
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent stream purposes under one master seed. Path and policy streams
// are separate so that all policies in a replicate see the same arrival path
// and the same routing randomness (common random numbers).
enum class StreamPurpose : std::uint64_t {
  path = 1,
  policy = 2,
  oracle = 3,
  bench = 4,
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 StreamPurpose purpose) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64_next(s);
  s = h ^ (index * 0x9e3779b97f4a7c15ull);
  h = splitmix64_next(s);
  s = h ^ (static_cast<std::uint64_t>(purpose) * 0xbf58476d1ce4e5b9ull);
  return splitmix64_next(s);
}

inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t index,
                                   StreamPurpose purpose) {
  return std::mt19937_64(derive_seed(master, index, purpose));
}

}  // namespace reserve
