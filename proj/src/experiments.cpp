#include "isoswarm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "isoswarm/errors.hpp"
#include "isoswarm/rng.hpp"
#include "isoswarm/swarm_optimizer.hpp"
#include "isoswarm/text_io.hpp"

namespace isoswarm {

namespace {

void validate_camera(const CameraModel& c) {
  if (!(c.phi > 0.0 && c.phi < std::numbers::pi)) throw ConfigError("camera.phi must lie in (0, pi)");
  if (!(c.nu > 0.0 && c.nu < std::numbers::pi)) throw ConfigError("camera.nu must lie in (0, pi)");
}

// Runs tasks[i] for every i on up to `threads` workers; results keep task order.
std::vector<TrialRecord> run_tasks(const std::vector<std::function<TrialRecord()>>& tasks, std::size_t threads) {
  std::vector<TrialRecord> results(tasks.size());
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(tasks.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(tasks.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
          try {
            results[i] = tasks[i]();
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

SpacecraftPose random_pose(Rng& rng, const Vector3& center, double distance, const CameraModel& camera) {
  SpacecraftPose pose;
  pose.position = center + distance * rng.unit_vector();
  pose.theta = kTwoPi * rng.uniform();
  pose.nu = camera.nu;
  pose.phi = camera.phi;
  return pose;
}

}  // namespace

void ViewProbabilityConfig::validate() const {
  if (!is_finite(iso_terminal_position)) throw ConfigError("iso_terminal_position must be finite");
  if (sphere_radii.empty()) throw ConfigError("sphere_radii must not be empty");
  std::set<double> seen;
  for (double r : sphere_radii) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("sphere_radii entries must be positive");
    if (!seen.insert(r).second) throw ConfigError("sphere_radii entries must be distinct");
  }
  if (trials_per_radius < 1) throw ConfigError("trials_per_radius must be at least 1");
  if (!(initial_distance_min < initial_distance_max)) throw ConfigError("initial_distance_range needs min < max");
  if (initial_distance_min < 1) throw ConfigError("initial_distance_range must be positive");
  if (n_pois < 1) throw ConfigError("n_pois must be at least 1");
  validate_camera(camera);
  try {
    optimizer.validate();
  } catch (const ParameterError& ex) {
    throw ConfigError(std::string("optimizer: ") + ex.what());
  }
}

void SwarmSizeConfig::validate() const {
  if (!(sphere_radius > 0.0) || !std::isfinite(sphere_radius)) throw ConfigError("sphere_radius must be positive");
  if (!is_finite(center)) throw ConfigError("center must be finite");
  if (n_pois < 1) throw ConfigError("n_pois must be at least 1");
  if (spacecraft_min < 1 || spacecraft_max > 32 || spacecraft_min > spacecraft_max) {
    throw ConfigError("spacecraft_range must satisfy 1 <= min <= max <= 32");
  }
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (!(start_distance_min_factor > 0.0) || !(start_distance_min_factor <= start_distance_max_factor)) {
    throw ConfigError("start_distance_factor_range needs 0 < min <= max");
  }
  validate_camera(camera);
  try {
    optimizer.validate();
  } catch (const ParameterError& ex) {
    throw ConfigError(std::string("optimizer: ") + ex.what());
  }
}

ExperimentReport run_view_probability(const ViewProbabilityConfig& config) {
  config.validate();
  ExperimentReport report;
  report.kind = ExperimentKind::kViewProbability;
  report.center = config.iso_terminal_position;
  report.master_seed = config.master_seed;
  report.success_criterion = config.success_criterion;

  std::vector<std::function<TrialRecord()>> tasks;
  for (double radius : config.sphere_radii) {
    for (std::size_t trial = 0; trial < config.trials_per_radius; ++trial) {
      tasks.emplace_back([&config, radius, trial] {
        const std::uint64_t seed = derive_seed(config.master_seed, {1, std::bit_cast<std::uint64_t>(radius), trial});
        const auto sphere = UncertaintyEllipsoid::sphere(radius, config.iso_terminal_position);
        const PoiSet pois = sample_pois(sphere, config.n_pois, derive_seed(seed, {0}));

        Rng init(derive_seed(seed, {1}));
        const auto distance =
            static_cast<double>(init.integer(config.initial_distance_min, config.initial_distance_max));
        SwarmConfig start{{random_pose(init, sphere.center, distance, config.camera)}, sphere};

        TrialRecord rec;
        rec.sphere_radius = radius;
        rec.n_spacecraft = 1;
        rec.trial = trial;
        rec.seed = seed;
        rec.initial_poses = start.spacecraft;
        if (config.success_criterion == SuccessCriterion::kSampledTruth) {
          rec.sampled_truth = sample_pois(sphere, 1, derive_seed(seed, {2})).points.front();
        }

        const auto opt = optimize_swarm(pois, 1, start, config.optimizer, CostMode::deterministic(), config.cost);
        rec.final_poses = opt.swarm.spacecraft;
        rec.coverage_pct = opt.breakdown.coverage_percentage();
        rec.neg_info_cost = -opt.breakdown.information_cost;
        rec.kappa_total = opt.breakdown.kappa_total;
        rec.iterations = opt.optimizer.iterations;
        rec.evaluations = opt.optimizer.evaluation_count;

        const Vector3 target = rec.sampled_truth.value_or(sphere.center);
        rec.success = visible(target, rec.final_poses.front().fov(sphere.center), sphere.center);
        return rec;
      });
    }
  }
  report.trials = run_tasks(tasks, config.threads);
  return report;
}

ExperimentReport run_swarm_size_sweep(const SwarmSizeConfig& config) {
  config.validate();
  ExperimentReport report;
  report.kind = ExperimentKind::kSwarmSize;
  report.center = config.center;
  report.master_seed = config.master_seed;

  const auto sphere = UncertaintyEllipsoid::sphere(config.sphere_radius, config.center);
  std::vector<PoiSet> poi_sets;
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    poi_sets.push_back(sample_pois(sphere, config.n_pois, derive_seed(config.master_seed, {2, trial})));
  }

  std::vector<std::function<TrialRecord()>> tasks;
  for (std::size_t n = config.spacecraft_min; n <= config.spacecraft_max; ++n) {
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      tasks.emplace_back([&config, &sphere, &poi_sets, n, trial] {
        const std::uint64_t seed = derive_seed(config.master_seed, {3, trial, n});
        Rng init(seed);
        SwarmConfig start{{}, sphere};
        for (std::size_t k = 0; k < n; ++k) {
          const double factor = config.start_distance_min_factor +
                                (config.start_distance_max_factor - config.start_distance_min_factor) * init.uniform();
          start.spacecraft.push_back(random_pose(init, sphere.center, factor * config.sphere_radius, config.camera));
        }

        TrialRecord rec;
        rec.sphere_radius = config.sphere_radius;
        rec.n_spacecraft = n;
        rec.trial = trial;
        rec.seed = seed;
        rec.initial_poses = start.spacecraft;

        const auto opt =
            optimize_swarm(poi_sets[trial], n, start, config.optimizer, CostMode::deterministic(), config.cost);
        rec.final_poses = opt.swarm.spacecraft;
        rec.coverage_pct = opt.breakdown.coverage_percentage();
        rec.neg_info_cost = -opt.breakdown.information_cost;
        rec.kappa_total = opt.breakdown.kappa_total;
        rec.iterations = opt.optimizer.iterations;
        rec.evaluations = opt.optimizer.evaluation_count;
        return rec;
      });
    }
  }
  report.trials = run_tasks(tasks, config.threads);
  return report;
}

MeanStd mean_std(std::vector<double> values) {
  if (values.empty()) throw EmptySetError("mean of an empty sample");
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

std::vector<CellSummary> aggregate(const ExperimentReport& report) {
  if (report.trials.empty()) throw EmptySetError("cannot aggregate an empty report");
  using Key = std::pair<double, std::size_t>;
  std::vector<Key> order;
  std::map<Key, std::vector<const TrialRecord*>> cells;
  for (const auto& t : report.trials) {
    const Key key{t.sphere_radius, t.n_spacecraft};
    if (!cells.contains(key)) order.push_back(key);
    cells[key].push_back(&t);
  }
  std::vector<CellSummary> out;
  for (const auto& key : order) {
    const auto& rows = cells[key];
    CellSummary s;
    s.sphere_radius = key.first;
    s.n_spacecraft = key.second;
    s.trials = rows.size();
    std::vector<double> coverage, neg_cost;
    for (const auto* r : rows) {
      s.successes += r->success ? 1 : 0;
      coverage.push_back(r->coverage_pct);
      neg_cost.push_back(r->neg_info_cost);
    }
    s.success_pct = 100.0 * static_cast<double>(s.successes) / static_cast<double>(s.trials);
    const auto c = mean_std(coverage);
    const auto g = mean_std(neg_cost);
    s.mean_coverage_pct = c.mean;
    s.std_coverage_pct = c.stddev;
    s.mean_neg_info_cost = g.mean;
    s.std_neg_info_cost = g.stddev;
    out.push_back(s);
  }
  return out;
}

bool recompute_success(const ExperimentReport& report, const TrialRecord& record) {
  if (record.final_poses.size() != 1) throw ParameterError("success flag is defined for single-spacecraft trials");
  const Vector3 target = record.sampled_truth.value_or(report.center);
  return visible(target, record.final_poses.front().fov(report.center), report.center);
}

namespace {

nlohmann::ordered_json vec_json(const Vector3& v) { return nlohmann::ordered_json::array({v.x, v.y, v.z}); }

nlohmann::ordered_json poses_json(const std::vector<SpacecraftPose>& poses) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : poses) {
    arr.push_back({{"position", vec_json(p.position)}, {"theta", p.theta}, {"nu", p.nu}, {"phi", p.phi}});
  }
  return arr;
}

const char* kind_name(ExperimentKind k) {
  return k == ExperimentKind::kViewProbability ? "view_probability" : "swarm_size";
}

}  // namespace

std::string report_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["experiment"] = kind_name(report.kind);
  j["master_seed"] = report.master_seed;
  j["center_km"] = vec_json(report.center);
  if (report.kind == ExperimentKind::kViewProbability) {
    j["success_criterion"] =
        report.success_criterion == SuccessCriterion::kSphereCenter ? "sphere_center" : "sampled_truth";
  }
  auto trials = nlohmann::ordered_json::array();
  for (const auto& t : report.trials) {
    nlohmann::ordered_json r;
    r["sphere_radius_km"] = t.sphere_radius;
    r["n_spacecraft"] = t.n_spacecraft;
    r["trial"] = t.trial;
    r["seed"] = t.seed;
    r["coverage_pct"] = t.coverage_pct;
    r["neg_info_cost"] = t.neg_info_cost;
    r["kappa_total"] = t.kappa_total;
    r["success"] = t.success;
    if (t.sampled_truth) r["sampled_truth_km"] = vec_json(*t.sampled_truth);
    r["iterations"] = t.iterations;
    r["evaluations"] = t.evaluations;
    r["initial_poses"] = poses_json(t.initial_poses);
    r["final_poses"] = poses_json(t.final_poses);
    trials.push_back(std::move(r));
  }
  j["trials"] = std::move(trials);

  auto cells = nlohmann::ordered_json::array();
  for (const auto& s : aggregate(report)) {
    nlohmann::ordered_json cell{{"sphere_radius_km", s.sphere_radius},
                                {"n_spacecraft", s.n_spacecraft},
                                {"trials", s.trials}};
    if (report.kind == ExperimentKind::kViewProbability) {
      cell["successes"] = s.successes;
      cell["success_pct"] = s.success_pct;
    }
    cell.update(nlohmann::ordered_json{{"mean_coverage_pct", s.mean_coverage_pct},
                     {"std_coverage_pct", s.std_coverage_pct},
                     {"mean_neg_info_cost", s.mean_neg_info_cost},
                     {"std_neg_info_cost", s.std_neg_info_cost}});
    cells.push_back(std::move(cell));
  }
  j["summary"] = std::move(cells);
  return j.dump(2);
}

std::string summary_csv(const ExperimentReport& report) {
  const auto cells = aggregate(report);
  std::ostringstream out;
  if (report.kind == ExperimentKind::kViewProbability) {
    out << "sphere_radius_km,trials,successes,p_pct,mean_coverage_pct,std_coverage_pct,mean_neg_info_cost,"
           "std_neg_info_cost\n";
    for (const auto& s : cells) {
      out << format_double(s.sphere_radius) << ',' << s.trials << ',' << s.successes << ','
          << format_double(s.success_pct) << ',' << format_double(s.mean_coverage_pct) << ','
          << format_double(s.std_coverage_pct) << ',' << format_double(s.mean_neg_info_cost) << ','
          << format_double(s.std_neg_info_cost) << '\n';
    }
    return out.str();
  }

  std::size_t n_trials = 0;
  for (const auto& t : report.trials) n_trials = std::max(n_trials, t.trial + 1);
  out << "table,row";
  for (const auto& s : cells) out << ',' << s.n_spacecraft;
  out << '\n';

  auto per_trial = [&](const char* table, auto&& field) {
    for (std::size_t trial = 0; trial < n_trials; ++trial) {
      out << table << ",trial_" << trial + 1;
      for (const auto& s : cells) {
        out << ',';
        for (const auto& t : report.trials) {
          if (t.n_spacecraft == s.n_spacecraft && t.trial == trial) out << format_double(field(t));
        }
      }
      out << '\n';
    }
  };
  per_trial("coverage_fraction", [](const TrialRecord& t) { return t.coverage_pct / 100.0; });
  per_trial("neg_info_cost", [](const TrialRecord& t) { return t.neg_info_cost; });

  auto summary_row = [&](const char* table, double CellSummary::*field) {
    out << table << ",all";
    for (const auto& s : cells) out << ',' << format_double(s.*field);
    out << '\n';
  };
  summary_row("mean_coverage_pct", &CellSummary::mean_coverage_pct);
  summary_row("std_coverage_pct", &CellSummary::std_coverage_pct);
  summary_row("mean_neg_info_cost", &CellSummary::mean_neg_info_cost);
  summary_row("std_neg_info_cost", &CellSummary::std_neg_info_cost);
  return out.str();
}

namespace {

using Json = nlohmann::json;

class FieldReader {
 public:
  explicit FieldReader(const Json& obj, std::string prefix = "") : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) throw ConfigError(prefix_ + ": expected an object");
  }

  const Json* find(const std::string& key) {
    used_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(name(key) + ": expected a number");
    return v->get<double>();
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned()) throw ConfigError(name(key) + ": expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback, std::size_t exact_size = 0) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_array()) throw ConfigError(name(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) throw ConfigError(name(key) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    if (exact_size != 0 && out.size() != exact_size) {
      throw ConfigError(name(key) + ": expected " + std::to_string(exact_size) + " entries");
    }
    return out;
  }

  std::string name(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void reject_unknown() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!used_.contains(key)) throw ConfigError("unknown key '" + name(key) + "'");
    }
  }

 private:
  const Json& obj_;
  std::string prefix_;
  std::set<std::string> used_;
};

CameraModel read_camera(FieldReader& top) {
  CameraModel cam;
  if (const Json* c = top.find("camera")) {
    FieldReader r(*c, "camera");
    cam.phi = r.number("phi", cam.phi);
    cam.nu = r.number("nu", cam.phi * 0.5);
    r.reject_unknown();
  }
  return cam;
}

NelderMeadOptions read_optimizer(FieldReader& top) {
  NelderMeadOptions o;
  if (const Json* c = top.find("optimizer")) {
    FieldReader r(*c, "optimizer");
    o.reflection = r.number("reflection", o.reflection);
    o.expansion = r.number("expansion", o.expansion);
    o.contraction = r.number("contraction", o.contraction);
    o.shrink = r.number("shrink", o.shrink);
    o.f_tolerance = r.number("f_tolerance", o.f_tolerance);
    o.x_tolerance = r.number("x_tolerance", o.x_tolerance);
    o.max_iterations = r.unsigned_int("max_iterations", o.max_iterations);
    o.max_evaluations = r.unsigned_int("max_evaluations", o.max_evaluations);
    o.initial_simplex_scale = r.number("initial_simplex_scale", o.initial_simplex_scale);
    r.reject_unknown();
  }
  return o;
}

CostOptions read_cost(FieldReader& top) {
  CostOptions o;
  if (const Json* c = top.find("cost")) {
    FieldReader r(*c, "cost");
    o.kappa_weight = r.number("kappa_weight", o.kappa_weight);
    o.identical_theta_delta = r.number("identical_theta_delta", o.identical_theta_delta);
    if (const Json* m = r.find("coverage_mode")) {
      if (*m == "percentage") {
        o.coverage_mode = CoverageMode::kPercentage;
      } else if (*m == "raw_count") {
        o.coverage_mode = CoverageMode::kRawCount;
      } else {
        throw ConfigError("cost.coverage_mode: expected \"percentage\" or \"raw_count\"");
      }
    }
    r.reject_unknown();
  }
  if (!(o.identical_theta_delta > 0.0)) throw ConfigError("cost.identical_theta_delta must be positive");
  if (!std::isfinite(o.kappa_weight) || o.kappa_weight < 0.0) throw ConfigError("cost.kappa_weight must be >= 0");
  return o;
}

std::int64_t as_integer(double v, const std::string& field) {
  if (v != std::floor(v)) throw ConfigError(field + ": expected integers");
  return static_cast<std::int64_t>(v);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& ex) {
    throw ConfigError(std::string("experiment config is not valid JSON: ") + ex.what());
  }
  FieldReader top(j);
  const Json* version = top.find("schema_version");
  if (!version || !version->is_number_integer() || version->get<int>() != 1) {
    throw ConfigError("schema_version: expected 1");
  }
  const Json* kind = top.find("experiment");
  if (!kind || !kind->is_string()) throw ConfigError("experiment: expected \"view_probability\" or \"swarm_size\"");

  if (*kind == "view_probability") {
    ViewProbabilityConfig c;
    const auto iso = top.numbers("iso_terminal_position", {0.0, 0.0, 0.0}, 3);
    c.iso_terminal_position = {iso[0], iso[1], iso[2]};
    c.sphere_radii = top.numbers("sphere_radii", c.sphere_radii);
    c.trials_per_radius = top.unsigned_int("trials_per_radius", c.trials_per_radius);
    const auto range = top.numbers("initial_distance_range",
                                   {static_cast<double>(c.initial_distance_min),
                                    static_cast<double>(c.initial_distance_max)},
                                   2);
    c.initial_distance_min = as_integer(range[0], "initial_distance_range");
    c.initial_distance_max = as_integer(range[1], "initial_distance_range");
    c.n_pois = top.unsigned_int("n_pois", c.n_pois);
    c.master_seed = top.unsigned_int("master_seed", c.master_seed);
    c.camera = read_camera(top);
    if (const Json* s = top.find("success_criterion")) {
      if (*s == "sphere_center") {
        c.success_criterion = SuccessCriterion::kSphereCenter;
      } else if (*s == "sampled_truth") {
        c.success_criterion = SuccessCriterion::kSampledTruth;
      } else {
        throw ConfigError("success_criterion: expected \"sphere_center\" or \"sampled_truth\"");
      }
    }
    c.optimizer = read_optimizer(top);
    c.cost = read_cost(top);
    top.reject_unknown();
    c.validate();
    return c;
  }
  if (*kind == "swarm_size") {
    SwarmSizeConfig c;
    c.sphere_radius = top.number("sphere_radius", c.sphere_radius);
    const auto center = top.numbers("center", {0.0, 0.0, 0.0}, 3);
    c.center = {center[0], center[1], center[2]};
    c.n_pois = top.unsigned_int("n_pois", c.n_pois);
    const auto range = top.numbers(
        "spacecraft_range", {static_cast<double>(c.spacecraft_min), static_cast<double>(c.spacecraft_max)}, 2);
    const auto lo = as_integer(range[0], "spacecraft_range");
    const auto hi = as_integer(range[1], "spacecraft_range");
    if (lo < 1 || hi < 1) throw ConfigError("spacecraft_range must satisfy 1 <= min <= max <= 32");
    c.spacecraft_min = static_cast<std::size_t>(lo);
    c.spacecraft_max = static_cast<std::size_t>(hi);
    c.trials = top.unsigned_int("trials", c.trials);
    c.master_seed = top.unsigned_int("master_seed", c.master_seed);
    const auto factors = top.numbers("start_distance_factor_range",
                                     {c.start_distance_min_factor, c.start_distance_max_factor}, 2);
    c.start_distance_min_factor = factors[0];
    c.start_distance_max_factor = factors[1];
    c.camera = read_camera(top);
    c.optimizer = read_optimizer(top);
    c.cost = read_cost(top);
    top.reject_unknown();
    c.validate();
    return c;
  }
  throw ConfigError("experiment: expected \"view_probability\" or \"swarm_size\"");
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

}  // namespace isoswarm
