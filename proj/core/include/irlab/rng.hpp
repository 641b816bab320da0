#pragma once

#include <cstdint>

namespace irlab {

// SplitMix64: a tiny counter-based 64-bit generator. Used everywhere instead of
// <random> engines so that a logged seed reproduces the same sample sequence on
// any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Derive an independent stream; deterministic in (current seed, stream id).
  SplitMix64 split(std::uint64_t stream) const {
    SplitMix64 mixer(state_ ^ (0x94d049bb133111ebULL * (stream + 1)));
    return SplitMix64(mixer.next());
  }

 private:
  std::uint64_t state_;
};

// Deterministic seed derivation for per-run streams.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  SplitMix64 g(base ^ (0xbf58476d1ce4e5b9ULL * (stream + 0x9e3779b97f4a7c15ULL)));
  return g.next();
}

// Draw an index from a categorical distribution given by p[0..n-1] (sums to 1).
inline int categorical(SplitMix64& rng, const double* p, int n) {
  double u = rng.uniform();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return n - 1;  // guard against accumulated rounding
}

}  // namespace irlab
