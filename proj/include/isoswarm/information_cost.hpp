// Information cost of a swarm: POI coverage against pairwise FOV overlap.
//
//   I = w * kappa_total - coverage
//
// kappa_total sums the angular overlap of every pair of FOV intervals
// (theta - nu, theta + nu) on the circle; coverage is the percentage of POIs
// visible to at least one spacecraft. Lower I is better.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "isoswarm/geometry.hpp"
#include "isoswarm/poi_sampling.hpp"

namespace isoswarm {

struct SpacecraftPose {
  Vector3 position;
  double theta = 0.0;  // wrapped to [0, 2*pi)
  double nu = std::numbers::pi / 6.0;
  double phi = std::numbers::pi / 3.0;

  ConeFov fov(const Vector3& ellipsoid_center) const {
    return ConeFov::toward(position, ellipsoid_center, phi, theta, nu);
  }
};

struct SwarmConfig {
  std::vector<SpacecraftPose> spacecraft;
  UncertaintyEllipsoid ellipsoid;

  std::size_t size() const { return spacecraft.size(); }
  // N >= 1, positions finite and distinct from the center, FOV parameters valid.
  void validate() const;
};

enum class CoverageMode {
  kPercentage,  // epsilon term in [0, 100]
  kRawCount,    // epsilon term = number of visible POIs
};

struct CostOptions {
  // Separation applied to identical orientations so that two coincident
  // FOVs report an overlap of 2*nu - delta rather than zero, rad.
  double identical_theta_delta = 1e-6;
  // Weight on kappa_total; 180/pi expresses the overlap in degrees.
  double kappa_weight = 1.0;
  CoverageMode coverage_mode = CoverageMode::kPercentage;
};

struct CostBreakdown {
  double kappa_total = 0.0;     // rad, unweighted
  double epsilon_term = 0.0;    // coverage percentage (or count in raw mode)
  double information_cost = 0.0;
  std::size_t visible_count = 0;
  std::size_t n_pois = 0;
  std::vector<std::size_t> visible_poi_indices;  // ascending

  double coverage_percentage() const {
    return n_pois == 0 ? 0.0 : 100.0 * static_cast<double>(visible_count) / static_cast<double>(n_pois);
  }
};

// (theta - nu, theta + nu), not normalized.
std::pair<double, double> fov_interval(const SpacecraftPose& pose);

// Length of the intersection of the two FOV arcs on the circle. Identical
// orientations are separated by `identical_theta_delta` first.
double pair_overlap(const SpacecraftPose& a, const SpacecraftPose& b,
                    double identical_theta_delta = 1e-6);

double kappa_total(const SwarmConfig& swarm, double identical_theta_delta = 1e-6);

struct Coverage {
  std::size_t count = 0;
  double percentage = 0.0;
};

Coverage coverage(const SwarmConfig& swarm, const PoiSet& pois);

// Indices of POIs seen by at least one spacecraft.
std::vector<std::size_t> visible_poi_indices(const SwarmConfig& swarm, const PoiSet& pois);

CostBreakdown information_cost(const SwarmConfig& swarm, const PoiSet& pois,
                               const CostOptions& options = {});

// Same value as information_cost(...).information_cost without collecting
// indices; used on the optimizer's hot path.
double information_cost_value(const SwarmConfig& swarm, const PoiSet& pois,
                              const CostOptions& options = {});

// Monte Carlo mean of I with every position perturbed by an isotropic
// N(0, stddev^2) offset; theta is left unperturbed. stddev == 0 returns the
// deterministic cost.
double expected_information_cost(const SwarmConfig& swarm, const PoiSet& pois,
                                 double position_stddev, std::size_t n_samples,
                                 std::uint64_t seed, const CostOptions& options = {});

// JSON object with kappa_total, epsilon_pct, info_cost, visible_count, n_pois.
std::string cost_breakdown_json(const CostBreakdown& breakdown);

// Pose file:
//   # isoswarm-swarm v1
//   x,y,z,theta,nu,phi
//   <row per spacecraft>
// The ellipsoid is supplied separately (from the POI file).
void write_swarm_csv(std::ostream& out, const std::vector<SpacecraftPose>& poses);
void write_swarm_csv(const std::filesystem::path& path, const std::vector<SpacecraftPose>& poses);
std::vector<SpacecraftPose> read_swarm_csv(std::istream& in);
std::vector<SpacecraftPose> read_swarm_csv(const std::filesystem::path& path);

}  // namespace isoswarm
