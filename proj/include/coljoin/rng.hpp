#pragma once

#include <cstdint>

namespace coljoin {

// SplitMix64 finalizer (Steele, Lea, Flood; public-domain constants).
inline uint64_t mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based generator: draw i of a stream is a pure function of
/// (stream seed, i), so columns can be generated independently and in
/// parallel with identical results.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  /// Derive an independent stream, e.g. one per column.
  CounterRng stream(uint64_t tag) const { return CounterRng(mix64(seed_ ^ mix64(tag + 0x9E3779B97F4A7C15ull))); }

  uint64_t at(uint64_t i) const { return mix64(seed_ + (i + 1) * 0x9E3779B97F4A7C15ull); }

  /// Uniform double in [0, 1) from draw i.
  double u01(uint64_t i) const { return static_cast<double>(at(i) >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) from draw i; bound >= 1.
  uint64_t below(uint64_t i, uint64_t bound) const {
    // 128-bit multiply avoids modulo bias beyond 2^-64
    return static_cast<uint64_t>((static_cast<__uint128_t>(at(i)) * bound) >> 64);
  }

 private:
  uint64_t seed_;
};

}  // namespace coljoin
