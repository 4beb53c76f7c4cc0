#include "isoswarm/rng.hpp"

#include <cmath>
#include <numbers>

#include "isoswarm/errors.hpp"

namespace isoswarm {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632BE59BD9B4E019ULL));
  return h;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ParameterError("integer range is empty");
  const double span = static_cast<double>(hi - lo) + 1.0;
  auto k = static_cast<std::int64_t>(std::floor(uniform() * span));
  if (k > hi - lo) k = hi - lo;
  return lo + k;
}

Vector3 Rng::unit_vector() {
  for (;;) {
    const Vector3 g{normal(), normal(), normal()};
    const double n = norm(g);
    if (n > 1e-300) return g * (1.0 / n);
  }
}

}  // namespace isoswarm
