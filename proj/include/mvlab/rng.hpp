// Deterministic 64-bit PRNG (splitmix64) with a fixed mapping to doubles.
// The stream is fully specified here, so identical seeds give bit-identical
// samples on every platform. Per-sample substreams are derived from
// (seed, index) so work can be partitioned without changing the stream.
#pragma once

#include <cstdint>

namespace mvlab {

struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 significant bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }
};

/// Substream for sample `index` of stream `seed`; stable contract.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
  Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  return Rng(mix.next_u64());
}

}  // namespace mvlab
