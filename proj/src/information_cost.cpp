#include "isoswarm/information_cost.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "isoswarm/errors.hpp"
#include "isoswarm/rng.hpp"
#include "isoswarm/text_io.hpp"

namespace isoswarm {

void SwarmConfig::validate() const {
  if (spacecraft.empty()) throw ParameterError("swarm must contain at least one spacecraft");
  ellipsoid.validate();
  for (const auto& sc : spacecraft) {
    if (!is_finite(sc.position) || !std::isfinite(sc.theta)) {
      throw DomainError("spacecraft pose must be finite");
    }
    // Constructing the cone checks phi, nu and apex != center.
    (void)sc.fov(ellipsoid.center);
  }
}

std::pair<double, double> fov_interval(const SpacecraftPose& pose) {
  return {pose.theta - pose.nu, pose.theta + pose.nu};
}

namespace {

// Circular distance between two angles, in [0, pi].
double circular_separation(double a, double b) {
  const double d = std::fmod(std::fabs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

double linear_overlap(double s1, double e1, double s2, double e2) {
  return std::max(0.0, std::min(e1, e2) - std::max(s1, s2));
}

struct PreparedCone {
  ConeFov fov;
  Vector3 hemisphere_normal;
};

std::vector<PreparedCone> prepare(const SwarmConfig& swarm) {
  std::vector<PreparedCone> cones;
  cones.reserve(swarm.size());
  for (const auto& sc : swarm.spacecraft) {
    ConeFov fov = sc.fov(swarm.ellipsoid.center);
    cones.push_back({fov, fov.apex() - swarm.ellipsoid.center});
  }
  return cones;
}

bool seen_by_any(const Vector3& poi, const Vector3& center, const std::vector<PreparedCone>& cones) {
  for (const auto& c : cones) {
    if (dot(poi - center, c.hemisphere_normal) >= 0.0 && in_fov(poi, c.fov)) return true;
  }
  return false;
}

double epsilon_term(std::size_t count, std::size_t n, CoverageMode mode) {
  if (mode == CoverageMode::kRawCount) return static_cast<double>(count);
  return 100.0 * static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace

double pair_overlap(const SpacecraftPose& a, const SpacecraftPose& b, double identical_theta_delta) {
  double sep = circular_separation(a.theta, b.theta);
  if (sep == 0.0) sep = identical_theta_delta;
  // Arc a is [-nu_a, nu_a]; arc b is centered at `sep`. Both are shorter than
  // 2*pi, so summing linear overlaps over the periodic images of b is exact.
  double total = 0.0;
  for (int k = -1; k <= 1; ++k) {
    const double shift = sep + k * kTwoPi;
    total += linear_overlap(-a.nu, a.nu, shift - b.nu, shift + b.nu);
  }
  return std::min(total, 2.0 * std::min(a.nu, b.nu));
}

double kappa_total(const SwarmConfig& swarm, double identical_theta_delta) {
  double total = 0.0;
  const auto& sc = swarm.spacecraft;
  for (std::size_t i = 0; i < sc.size(); ++i) {
    for (std::size_t j = i + 1; j < sc.size(); ++j) {
      total += pair_overlap(sc[i], sc[j], identical_theta_delta);
    }
  }
  return total;
}

std::vector<std::size_t> visible_poi_indices(const SwarmConfig& swarm, const PoiSet& pois) {
  const auto cones = prepare(swarm);
  const Vector3& center = swarm.ellipsoid.center;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pois.points.size(); ++i) {
    if (seen_by_any(pois.points[i], center, cones)) out.push_back(i);
  }
  return out;
}

Coverage coverage(const SwarmConfig& swarm, const PoiSet& pois) {
  if (pois.empty()) throw EmptySetError("coverage needs at least one POI");
  const auto cones = prepare(swarm);
  const Vector3& center = swarm.ellipsoid.center;
  std::size_t count = 0;
  for (const auto& p : pois.points) count += seen_by_any(p, center, cones) ? 1 : 0;
  return {count, epsilon_term(count, pois.size(), CoverageMode::kPercentage)};
}

CostBreakdown information_cost(const SwarmConfig& swarm, const PoiSet& pois, const CostOptions& options) {
  if (pois.empty()) throw EmptySetError("information cost needs at least one POI");
  CostBreakdown out;
  out.kappa_total = kappa_total(swarm, options.identical_theta_delta);
  out.visible_poi_indices = visible_poi_indices(swarm, pois);
  out.visible_count = out.visible_poi_indices.size();
  out.n_pois = pois.size();
  out.epsilon_term = epsilon_term(out.visible_count, out.n_pois, options.coverage_mode);
  out.information_cost = options.kappa_weight * out.kappa_total - out.epsilon_term;
  return out;
}

double information_cost_value(const SwarmConfig& swarm, const PoiSet& pois, const CostOptions& options) {
  if (pois.empty()) throw EmptySetError("information cost needs at least one POI");
  const double kappa = kappa_total(swarm, options.identical_theta_delta);
  const auto cones = prepare(swarm);
  const Vector3& center = swarm.ellipsoid.center;
  std::size_t count = 0;
  for (const auto& p : pois.points) count += seen_by_any(p, center, cones) ? 1 : 0;
  return options.kappa_weight * kappa - epsilon_term(count, pois.size(), options.coverage_mode);
}

double expected_information_cost(const SwarmConfig& swarm, const PoiSet& pois, double position_stddev,
                                 std::size_t n_samples, std::uint64_t seed, const CostOptions& options) {
  if (n_samples == 0) throw ParameterError("expected cost needs at least one sample");
  if (!(position_stddev >= 0.0) || !std::isfinite(position_stddev)) {
    throw ParameterError("position standard deviation must be finite and non-negative");
  }
  if (position_stddev == 0.0) return information_cost_value(swarm, pois, options);

  Rng rng(seed);
  SwarmConfig perturbed = swarm;
  double sum = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t i = 0; i < swarm.size(); ++i) {
      const Vector3 offset{rng.normal(), rng.normal(), rng.normal()};
      perturbed.spacecraft[i].position = swarm.spacecraft[i].position + position_stddev * offset;
    }
    sum += information_cost_value(perturbed, pois, options);
  }
  return sum / static_cast<double>(n_samples);
}

std::string cost_breakdown_json(const CostBreakdown& b) {
  nlohmann::ordered_json j;
  j["kappa_total"] = b.kappa_total;
  j["epsilon_pct"] = b.coverage_percentage();
  j["info_cost"] = b.information_cost;
  j["visible_count"] = b.visible_count;
  j["n_pois"] = b.n_pois;
  return j.dump(2);
}

void write_swarm_csv(std::ostream& out, const std::vector<SpacecraftPose>& poses) {
  out << "# isoswarm-swarm v1\n";
  out << "x,y,z,theta,nu,phi\n";
  for (const auto& p : poses) {
    out << format_vector(p.position) << ',' << format_double(p.theta) << ',' << format_double(p.nu) << ','
        << format_double(p.phi) << '\n';
  }
}

void write_swarm_csv(const std::filesystem::path& path, const std::vector<SpacecraftPose>& poses) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_swarm_csv(out, poses);
}

std::vector<SpacecraftPose> read_swarm_csv(std::istream& in) {
  std::vector<SpacecraftPose> poses;
  std::string line;
  std::size_t line_no = 0;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!saw_columns) {
      if (t != "x,y,z,theta,nu,phi") throw ParseError("expected column header 'x,y,z,theta,nu,phi'", line_no);
      saw_columns = true;
      continue;
    }
    const auto f = split(t, ',');
    if (f.size() != 6) throw ParseError("expected 6 fields, got " + std::to_string(f.size()), line_no);
    SpacecraftPose p;
    p.position = {parse_double(f[0], line_no), parse_double(f[1], line_no), parse_double(f[2], line_no)};
    p.theta = wrap_angle(parse_double(f[3], line_no));
    p.nu = parse_double(f[4], line_no);
    p.phi = parse_double(f[5], line_no);
    if (!(p.nu > 0.0 && p.nu < std::numbers::pi) || !(p.phi > 0.0 && p.phi < std::numbers::pi)) {
      throw ParseError("nu and phi must lie in (0, pi)", line_no);
    }
    poses.push_back(p);
  }
  if (!saw_columns) throw ParseError("missing column header", line_no + 1);
  if (poses.empty()) throw ParseError("pose file has no spacecraft rows", line_no);
  return poses;
}

std::vector<SpacecraftPose> read_swarm_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_swarm_csv(in);
}

}  // namespace isoswarm
