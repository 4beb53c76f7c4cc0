// Optimizes spacecraft terminal positions and FOV orientations.
//
// The decision vector is [x, y, z, theta] per spacecraft (4N entries);
// theta coordinates are wrapped by the simplex. Candidates that put a
// spacecraft within kCenterExclusionKm of the ellipsoid center receive the
// finite penalty kDegeneratePenalty instead of a cost.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "isoswarm/information_cost.hpp"
#include "isoswarm/nelder_mead.hpp"

namespace isoswarm {

inline constexpr double kCenterExclusionKm = 1e-6;
inline constexpr double kDegeneratePenalty = 1e9;

struct CostMode {
  bool expected = false;
  double position_stddev = 0.0;
  std::size_t n_samples = 1;
  std::uint64_t seed = 0;

  static CostMode deterministic() { return {}; }
  static CostMode expectation(double stddev, std::size_t n_samples, std::uint64_t seed) {
    return {true, stddev, n_samples, seed};
  }
};

struct SwarmOptimization {
  SwarmConfig swarm;
  CostBreakdown breakdown;
  OptResult optimizer;
};

std::vector<double> pack_swarm(const SwarmConfig& swarm);
// Writes positions and theta from `x` into a copy of `templ`.
SwarmConfig unpack_swarm(std::span<const double> x, const SwarmConfig& templ);

// Objective value used by optimize_swarm for decision vector `x`.
double swarm_objective(std::span<const double> x, const SwarmConfig& templ, const PoiSet& pois,
                       const CostMode& mode, const CostOptions& cost_options);

SwarmOptimization optimize_swarm(const PoiSet& pois, std::size_t n_spacecraft, const SwarmConfig& initial,
                                 const NelderMeadOptions& options = {},
                                 const CostMode& mode = CostMode::deterministic(),
                                 const CostOptions& cost_options = {}, const TraceCallback& trace = {});

}  // namespace isoswarm
