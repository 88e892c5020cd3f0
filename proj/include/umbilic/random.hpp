#pragma once

#include <cstdint>

namespace umbilic {

/// Counter-based stream: draw i of stream s is a pure function of
/// (seed, s, i), so work can be split across threads without changing
/// the numbers drawn.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream = 0) : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const { return mix(key_ + counter * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const { return (bits(counter) >> 11) * 0x1.0p-53; }
  double uniform(std::uint64_t counter, double lo, double hi) const { return lo + (hi - lo) * uniform(counter); }

 private:
  // splitmix64 finaliser
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace umbilic
