// Seeded Monte Carlo campaigns.
//
// view probability: one spacecraft per trial, starting at a random integer
//   distance from the sphere center, is optimized against a fresh POI set;
//   a trial succeeds when the target (the sphere center, or optionally a
//   sampled "true" position) is visible from the final pose.
// swarm size: for each trial one POI set is shared by every swarm size N in
//   the requested range; each N starts from independently drawn positions
//   well outside the sphere and is optimized separately.
//
// Every trial draws from its own stream derived from (master seed, cell key,
// trial index), so results do not depend on scheduling or thread count.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "isoswarm/information_cost.hpp"
#include "isoswarm/nelder_mead.hpp"

namespace isoswarm {

struct CameraModel {
  double phi = std::numbers::pi / 3.0;  // full aperture
  double nu = std::numbers::pi / 6.0;   // angular half-width for overlap
};

enum class SuccessCriterion {
  kSphereCenter,
  kSampledTruth,  // truth drawn uniformly inside the sphere per trial
};

struct ViewProbabilityConfig {
  Vector3 iso_terminal_position;
  std::vector<double> sphere_radii{50.0, 500.0, 1000.0};
  std::size_t trials_per_radius = 24;
  std::int64_t initial_distance_min = 100;
  std::int64_t initial_distance_max = 600;
  std::size_t n_pois = 5000;
  std::uint64_t master_seed = 1;
  CameraModel camera;
  SuccessCriterion success_criterion = SuccessCriterion::kSphereCenter;
  NelderMeadOptions optimizer;
  CostOptions cost;
  std::size_t threads = 1;

  void validate() const;
};

struct SwarmSizeConfig {
  double sphere_radius = 100.0;
  Vector3 center;
  std::size_t n_pois = 5000;
  std::size_t spacecraft_min = 1;
  std::size_t spacecraft_max = 7;
  std::size_t trials = 3;
  std::uint64_t master_seed = 1;
  // Initial distances are uniform in [min, max] * sphere_radius.
  double start_distance_min_factor = 3.0;
  double start_distance_max_factor = 6.0;
  CameraModel camera;
  NelderMeadOptions optimizer;
  CostOptions cost;
  std::size_t threads = 1;

  void validate() const;
};

enum class ExperimentKind { kViewProbability, kSwarmSize };

struct TrialRecord {
  double sphere_radius = 0.0;
  std::size_t n_spacecraft = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double coverage_pct = 0.0;
  double neg_info_cost = 0.0;  // -I
  double kappa_total = 0.0;
  bool success = false;
  std::optional<Vector3> sampled_truth;
  std::vector<SpacecraftPose> initial_poses;
  std::vector<SpacecraftPose> final_poses;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::kViewProbability;
  Vector3 center;
  std::uint64_t master_seed = 0;
  SuccessCriterion success_criterion = SuccessCriterion::kSphereCenter;
  std::vector<TrialRecord> trials;  // ordered by cell, then trial index
};

// One table cell: a radius (view probability) or a swarm size.
struct CellSummary {
  double sphere_radius = 0.0;
  std::size_t n_spacecraft = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_pct = 0.0;
  double mean_coverage_pct = 0.0;
  double std_coverage_pct = 0.0;
  double mean_neg_info_cost = 0.0;
  double std_neg_info_cost = 0.0;
};

ExperimentReport run_view_probability(const ViewProbabilityConfig& config);
ExperimentReport run_swarm_size_sweep(const SwarmSizeConfig& config);

// Mean and population standard deviation of `values`; the summation order is
// canonical (sorted), so any permutation of the input gives identical bits.
struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};
MeanStd mean_std(std::vector<double> values);

// Per-cell statistics in first-appearance order of the cells. Throws
// EmptySetError for a report without trials.
std::vector<CellSummary> aggregate(const ExperimentReport& report);

// Success flag recomputed from the stored final pose.
bool recompute_success(const ExperimentReport& report, const TrialRecord& record);

std::string report_json(const ExperimentReport& report);
// view probability: one row per radius. swarm size: tables with one column
// per swarm size (per-trial coverage fraction, per-trial -I, mean/std rows).
std::string summary_csv(const ExperimentReport& report);

using ExperimentConfig = std::variant<ViewProbabilityConfig, SwarmSizeConfig>;

// JSON config with "schema_version": 1 and "experiment": "view_probability"
// or "swarm_size". Unknown keys throw ConfigError naming the field.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace isoswarm
