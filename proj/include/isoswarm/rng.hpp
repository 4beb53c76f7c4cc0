// Seeded random streams.
//
// Every stream is a std::mt19937_64 engine (the standard 64-bit Mersenne
// Twister, whose output sequence is fixed by the C++ standard). Variates are
// derived from raw 64-bit outputs with the transforms below rather than the
// implementation-defined <random> distributions, so a stream is identical on
// every platform and can be replicated in other languages:
//
//   uniform()   = (next() >> 11) * 2^-53                       in [0, 1)
//   normal()    = Box-Muller on two uniforms, u1 replaced by 1 - u1, pair cached
//   integer(a,b)= a + floor(uniform() * (b - a + 1))
//
// Sub-stream seeds are derived with the SplitMix64 finalizer applied to a
// running combination of the master seed and a list of indices.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "isoswarm/vector3.hpp"

namespace isoswarm {

std::uint64_t splitmix64(std::uint64_t x);

// Seed for the stream identified by (master, path...). Distinct paths give
// statistically independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double normal();
  // Uniform integer in the closed range [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  // Uniform direction on the unit sphere (normalized Gaussian triple).
  Vector3 unit_vector();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace isoswarm
