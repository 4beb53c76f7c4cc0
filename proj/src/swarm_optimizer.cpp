#include "isoswarm/swarm_optimizer.hpp"

#include <string>

#include "isoswarm/errors.hpp"

namespace isoswarm {

std::vector<double> pack_swarm(const SwarmConfig& swarm) {
  std::vector<double> x;
  x.reserve(4 * swarm.size());
  for (const auto& sc : swarm.spacecraft) {
    x.insert(x.end(), {sc.position.x, sc.position.y, sc.position.z, sc.theta});
  }
  return x;
}

SwarmConfig unpack_swarm(std::span<const double> x, const SwarmConfig& templ) {
  if (x.size() != 4 * templ.size()) throw ParameterError("decision vector size does not match the swarm");
  SwarmConfig out = templ;
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto& sc = out.spacecraft[k];
    sc.position = {x[4 * k], x[4 * k + 1], x[4 * k + 2]};
    sc.theta = wrap_angle(x[4 * k + 3]);
  }
  return out;
}

double swarm_objective(std::span<const double> x, const SwarmConfig& templ, const PoiSet& pois,
                       const CostMode& mode, const CostOptions& cost_options) {
  const SwarmConfig swarm = unpack_swarm(x, templ);
  for (const auto& sc : swarm.spacecraft) {
    if (norm(sc.position - swarm.ellipsoid.center) < kCenterExclusionKm) return kDegeneratePenalty;
  }
  if (mode.expected) {
    return expected_information_cost(swarm, pois, mode.position_stddev, mode.n_samples, mode.seed, cost_options);
  }
  return information_cost_value(swarm, pois, cost_options);
}

SwarmOptimization optimize_swarm(const PoiSet& pois, std::size_t n_spacecraft, const SwarmConfig& initial,
                                 const NelderMeadOptions& options, const CostMode& mode,
                                 const CostOptions& cost_options, const TraceCallback& trace) {
  if (pois.empty()) throw EmptySetError("optimize_swarm needs POIs");
  if (initial.size() != n_spacecraft) {
    throw ParameterError("initial swarm has " + std::to_string(initial.size()) + " spacecraft, expected " +
                         std::to_string(n_spacecraft));
  }
  initial.validate();

  OptimizationProblem problem;
  problem.dimension = 4 * n_spacecraft;
  for (std::size_t k = 0; k < n_spacecraft; ++k) problem.angle_indices.push_back(4 * k + 3);
  problem.objective = [&](std::span<const double> x) {
    return swarm_objective(x, initial, pois, mode, cost_options);
  };

  const auto x0 = pack_swarm(initial);
  SwarmOptimization out;
  out.optimizer = nelder_mead(problem, x0, options, trace);
  out.swarm = unpack_swarm(out.optimizer.best_point, initial);
  out.breakdown = information_cost(out.swarm, pois, cost_options);
  return out;
}

}  // namespace isoswarm
