#pragma once

#include <cstdint>
#include <initializer_list>

namespace theon {

// Counter-based generator: every draw is a pure function of the seed and a
// list of stream keys, so results do not depend on evaluation order or on
// how work is split between threads.
namespace rng {

inline uint64_t mix(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t hash(uint64_t seed, std::initializer_list<uint64_t> keys) {
  uint64_t h = mix(seed ^ 0x243f6a8885a308d3ULL);
  for (uint64_t k : keys) h = mix(h ^ k);
  return h;
}

}  // namespace rng

}  // namespace theon
