#pragma once

// SplitMix64: the named, seeded, portable generator used for all sampled
// campaigns.  Identical streams on every platform for a given seed.

#include <cstdint>

#include "cyclo.hpp"

namespace cyclopd {

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// Fork an independent stream (for per-trial determinism under --parallel).
  SplitMix64 fork(std::uint64_t salt) {
    SplitMix64 s(state ^ (salt * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    s.next();
    return s;
  }
};

/// Random element of O_{s,N}.
inline CycloElem random_elem(const RingSpec& r, SplitMix64& rng) {
  CycloElem z(r);
  for (auto& v : z.c) v = rng.below(r.mod);
  return z;
}

/// Random unit (val = 0).
inline CycloElem random_unit(const RingSpec& r, SplitMix64& rng) {
  for (;;) {
    CycloElem z = random_elem(r, rng);
    if (val_steps(z) == 0) return z;
  }
}

/// Random element with pi-valuation >= floor.
inline CycloElem random_with_val_floor(const RingSpec& r, SplitMix64& rng, i64 floor) {
  CycloElem z = random_elem(r, rng);
  if (floor <= 0) return z;
  return pow(uniformizer(r), floor) * z;
}

} // namespace cyclopd
