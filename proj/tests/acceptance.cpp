// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// non-zero if any selected criterion fails.
//
//   acceptance                 all criteria
//   acceptance --criterion N   criterion N only
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "isoswarm/encounter_bound.hpp"
#include "isoswarm/experiments.hpp"
#include "isoswarm/geometry.hpp"
#include "isoswarm/information_cost.hpp"
#include "isoswarm/nelder_mead.hpp"
#include "isoswarm/poi_sampling.hpp"

using namespace isoswarm;

namespace {

constexpr double kPi = std::numbers::pi;
const std::filesystem::path kConfigs = ISOSWARM_CONFIG_DIR;

struct Outcome {
  bool pass;
  std::string detail;
};

// Independent generator for the checks; std distributions only.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  Vector3 vec(double scale) { return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)}; }
  Vector3 unit() {
    std::normal_distribution<double> g;
    Vector3 v{g(eng_), g(eng_), g(eng_)};
    return v * (1.0 / norm(v));
  }

 private:
  std::mt19937_64 eng_;
};

std::size_t worker_count() { return std::max<std::size_t>(1, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

SwarmConfig random_swarm(Draw& d, std::size_t n, double radius) {
  SwarmConfig s{{}, UncertaintyEllipsoid::sphere(radius, d.vec(1000))};
  for (std::size_t k = 0; k < n; ++k) {
    s.spacecraft.push_back({s.ellipsoid.center + d.unit() * d.uniform(1.2 * radius, 8 * radius),
                            d.uniform(0, 2 * kPi), d.uniform(0.05, 1.2), d.uniform(0.1, 2.5)});
  }
  return s;
}

Outcome cone_oracle() {
  Draw d(101);
  const auto t0 = std::chrono::steady_clock::now();
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vector3 apex = d.vec(1000), center = d.vec(1000);
    const double phi = d.uniform(0.01, kPi - 0.01);
    const Vector3 poi = center + d.vec(300);
    const auto fov = ConeFov::toward(apex, center, phi);
    const Vector3 ray = poi - apex, axis = center - apex;
    const double angle = std::acos(std::clamp(dot(ray, axis) / (norm(ray) * norm(axis)), -1.0, 1.0));
    mismatches += in_fov(poi, fov) != (angle <= phi / 2);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {mismatches == 0 && secs < 1.0, fmt("mismatches=%.0f runtime=%.3fs", mismatches, secs)};
}

Outcome kappa_bruteforce() {
  Draw d(102);
  const double h = 1e-4;
  const int steps = static_cast<int>(std::ceil(2 * kPi / h));
  double worst = 0.0;
  bool symmetric = true;
  auto within = [](double x, double center, double nu) {
    const double gap = std::fmod(std::fabs(x - center), 2 * kPi);
    return std::min(gap, 2 * kPi - gap) <= nu;
  };
  for (int i = 0; i < 10000; ++i) {
    const double nu = d.uniform(0.01, 1.5);
    const double ta = d.uniform(0, 2 * kPi), tb = d.uniform(0, 2 * kPi);
    const SpacecraftPose a{{1, 0, 0}, ta, nu}, b{{1, 0, 0}, tb, nu};
    int both = 0;
    for (int k = 0; k < steps; ++k) both += within(k * h, ta, nu) && within(k * h, tb, nu);
    const double exact = pair_overlap(a, b);
    worst = std::max(worst, std::fabs(exact - both * h));
    symmetric = symmetric && exact == pair_overlap(b, a);
  }
  return {worst <= 2e-4 && symmetric, fmt("max|err|=%.3g rad symmetric=%.0f", worst, symmetric)};
}

Outcome cost_identity() {
  Draw d(103);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto swarm = random_swarm(d, 1 + i % 6, d.uniform(1, 500));
    const auto pois = sample_pois(swarm.ellipsoid, 200, 5000 + i);
    const auto b = information_cost(swarm, pois);
    violations += b.information_cost != kappa_total(swarm) - coverage(swarm, pois).percentage;
  }
  return {violations == 0, fmt("violations=%.0f of 1000 scenes", violations)};
}

ContractionParams feasible_params(Draw& d) {
  for (;;) {
    ContractionParams p;
    p.alpha_c = d.uniform(0.5, 3);
    p.alpha_e = d.uniform(0.5, 3);
    p.m_c_lower = d.uniform(0.5, 2);
    p.m_c_upper = p.m_c_lower * d.uniform(1, 2);
    p.m_e_lower = d.uniform(0.5, 2);
    p.m_e_upper = p.m_e_lower * d.uniform(1, 2);
    p.gamma_c = d.uniform(0.05, 0.5);
    p.eps_c = d.uniform(0, 0.2);
    p.eps_e = d.uniform(0, 0.2);
    p.g_bar = d.uniform(0, 1);
    p.u_bar = d.uniform(0, 1);
    p.h_bar = d.uniform(0, 1);
    p.ell_bar = d.uniform(0, 2);
    p.lambda = d.uniform(0.2, 2);
    p.alpha_s = d.uniform(0.01, 0.2);
    if (check_rate_matrix(p).feasible) return p;
  }
}

Outcome zeta_quadrature() {
  ContractionParams p;
  p.alpha_s = 0.1;
  p.lambda = 0.7;
  p.m_e_upper = 1.3;
  p.ell_bar = 2.5;
  const double c = 0.04, t = 30.0;
  const double exact = p.lambda * p.m_e_upper * p.ell_bar * c * (std::exp(2 * p.alpha_s * t) - 1) / (2 * p.alpha_s);
  const double approx = zeta_integral(t, p, NoiseProfile::constant(c, t, 10000));
  const double rel = std::fabs(approx - exact) / exact;
  return {rel < 1e-6, fmt("relative error=%.3g", rel)};
}

Outcome bound_sanity() {
  Draw d(105);
  ContractionParams quiet = feasible_params(d);
  quiet.eps_c = 0.0;
  const auto silent = NoiseProfile::constant(0.0, 10.0, 10);
  const auto zero = evaluate_bound(1.5, 4.0, 0.0, quiet, silent);
  const bool exact = zero.failure_prob_upper == 0.0 && zero.success_prob_lower == 1.0;

  double worst = 0.0;
  bool monotone = true;
  for (int i = 0; i < 1000; ++i) {
    const auto p = feasible_params(d);
    NoiseProfile noise;
    for (int k = 0; k <= 20; ++k) noise.samples.push_back({k * 1.0, d.uniform(0, 0.1)});
    const double t = d.uniform(0, 20), v0 = d.uniform(0, 5);
    const auto r = evaluate_bound(d.uniform(0.01, 10), t, v0, p, noise);
    worst = std::max(worst, std::fabs(r.success_raw + r.failure_raw - 1.0));
    double prev = INFINITY;
    for (double dist = 0.01; dist < 100; dist *= 1.7) {
      const double f = failure_probability_bound(dist, t, v0, p, noise);
      monotone = monotone && f <= prev;
      prev = f;
    }
  }
  return {exact && worst <= 1e-12 && monotone,
          fmt("zero-input exact=%.0f max|s+f-1|=%.3g monotone=%.0f", exact, worst, monotone)};
}

Outcome radius_roundtrip() {
  ContractionParams p;
  p.alpha_c = 2;
  p.alpha_e = 2;
  p.m_c_lower = 0.5;
  p.m_e_lower = 0.5;
  p.gamma_c = 0.5;
  p.g_bar = 1;
  p.eps_c = 0.05;
  p.ell_bar = 1;
  const auto noise = NoiseProfile::constant(0.01, 20.0, 2000);
  double worst = 0.0;
  for (double target : {0.1, 0.5, 0.9, 0.99}) {
    const double dist = radius_for_success_probability(target, 10.0, 1.0, p, noise);
    worst = std::max(worst, std::fabs(success_probability(dist, 10.0, 1.0, p, noise) - target));
  }
  return {worst <= 1e-9, fmt("max|p'-p|=%.3g", worst)};
}

Outcome nelder_mead_checks() {
  OptimizationProblem rosen{2,
                            [](std::span<const double> x) {
                              return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
                            },
                            {}};
  const std::vector<double> x0{-1.2, 1.0};
  NelderMeadOptions opts;
  opts.f_tolerance = 1e-16;
  opts.x_tolerance = 1e-12;
  opts.max_iterations = 5000;
  opts.max_evaluations = 5000;
  const auto r = nelder_mead(rosen, x0, opts);

  double lo = INFINITY, hi = -INFINITY;
  OptimizationProblem wave{1,
                           [&](std::span<const double> x) {
                             lo = std::min(lo, x[0]);
                             hi = std::max(hi, x[0]);
                             return 1 - std::cos(x[0] - 5.5);
                           },
                           {0}};
  const std::vector<double> t0{0.4};
  NelderMeadOptions wopts;
  wopts.initial_simplex_scale = 0.5;
  const auto w = nelder_mead(wave, t0, wopts);
  const bool wrapped = lo >= 0 && hi < 2 * kPi && w.converged && w.best_value < 1e-6;
  return {r.best_value < 1e-10 && r.evaluation_count <= 5000 && wrapped,
          fmt("rosenbrock f=%.3g evals=%.0f, wrapped sinusoid ok=%.0f", r.best_value,
              static_cast<double>(r.evaluation_count), wrapped)};
}

Outcome sampling_fraction() {
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto pois = sample_pois(UncertaintyEllipsoid::sphere(1.0), 5000, seed);
    const auto inner = std::count_if(pois.points.begin(), pois.points.end(), [](const Vector3& p) { return norm(p) <= 0.5; });
    const double frac = static_cast<double>(inner) / 5000.0;
    good += frac >= 0.105 && frac <= 0.145;
  }
  return {good >= 95, fmt("%.0f of 100 seeds in [0.105, 0.145]", good)};
}

ViewProbabilityConfig experiment1(std::uint64_t seed, SuccessCriterion criterion) {
  auto cfg = std::get<ViewProbabilityConfig>(load_experiment_config(kConfigs / "experiment1.json"));
  cfg.trials_per_radius = 50;
  cfg.sphere_radii = {50, 500, 1000};
  cfg.master_seed = seed;
  cfg.success_criterion = criterion;
  cfg.threads = worker_count();
  return cfg;
}

Outcome view_probability_trend() {
  const std::uint64_t seeds[] = {1, 2, 3, 4, 5};
  std::vector<double> center_p(3, 0.0), truth_p(3, 0.0);
  for (auto seed : seeds) {
    const auto cells = aggregate(run_view_probability(experiment1(seed, SuccessCriterion::kSphereCenter)));
    const auto truth = aggregate(run_view_probability(experiment1(seed, SuccessCriterion::kSampledTruth)));
    for (std::size_t k = 0; k < 3; ++k) {
      center_p[k] += cells[k].success_pct / 5.0;
      truth_p[k] += truth[k].success_pct / 5.0;
    }
  }
  std::printf("  info: sampled-truth criterion p(50)=%.1f p(500)=%.1f p(1000)=%.1f\n", truth_p[0], truth_p[1],
              truth_p[2]);
  const double drop = center_p[0] - center_p[2];
  return {drop >= 10.0,
          fmt("p(50)=%.1f p(500)=%.1f p(1000)=%.1f", center_p[0], center_p[1], center_p[2]) +
              fmt(" drop=%.1f pp", drop)};
}

// Criteria 10 and 11 share one sweep.
const std::vector<CellSummary>& experiment2_cells() {
  static const std::vector<CellSummary> cells = [] {
    auto cfg = std::get<SwarmSizeConfig>(load_experiment_config(kConfigs / "experiment2.json"));
    cfg.trials = 5;
    cfg.threads = worker_count();
    return aggregate(run_swarm_size_sweep(cfg));
  }();
  return cells;
}

Outcome coverage_trend() {
  const auto& c = experiment2_cells();
  std::string detail = "coverage";
  for (const auto& cell : c) detail += fmt(" N%.0f=%.1f", static_cast<double>(cell.n_spacecraft), cell.mean_coverage_pct);
  const double gain = c[6].mean_coverage_pct - c[0].mean_coverage_pct;
  return {gain >= 25.0 && c[4].mean_coverage_pct >= 80.0, detail + fmt(" gain=%.1f pp", gain)};
}

Outcome cost_trend() {
  const auto& c = experiment2_cells();
  std::string detail = "-I";
  double first_five = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    detail += fmt(" N%.0f=%.1f", static_cast<double>(c[k].n_spacecraft), c[k].mean_neg_info_cost);
    if (k < 5) first_five += c[k].mean_neg_info_cost / 5.0;
  }
  return {c[6].mean_neg_info_cost < first_five, detail + fmt(" mean(N1..5)=%.1f", first_five)};
}

Outcome union_monotonicity() {
  Draw d(112);
  int violations = 0;
  for (int scene = 0; scene < 100; ++scene) {
    auto swarm = random_swarm(d, 1, d.uniform(5, 500));
    const auto pois = sample_pois(swarm.ellipsoid, 1000, 9000 + scene);
    std::size_t prev = coverage(swarm, pois).count;
    for (int k = 0; k < 7; ++k) {
      auto extra = random_swarm(d, 1, swarm.ellipsoid.radii.x);
      extra.spacecraft.front().position += swarm.ellipsoid.center - extra.ellipsoid.center;
      swarm.spacecraft.push_back(extra.spacecraft.front());
      const std::size_t now = coverage(swarm, pois).count;
      violations += now < prev;
      prev = now;
    }
  }
  return {violations == 0, fmt("violations=%.0f over 100 scenes x 7 appends", violations)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-12)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"cone containment matches the angular oracle", cone_oracle},
      {"pairwise overlap matches discretized arcs", kappa_bruteforce},
      {"information cost identity is bit-exact", cost_identity},
      {"noise integral matches the closed form", zeta_quadrature},
      {"bound sanity", bound_sanity},
      {"radius inversion round trip", radius_roundtrip},
      {"simplex optimizer", nelder_mead_checks},
      {"uniform ellipsoid sampling", sampling_fraction},
      {"view probability falls with sphere radius", view_probability_trend},
      {"coverage grows with swarm size", coverage_trend},
      {"-I drops at large swarm size", cost_trend},
      {"coverage union is monotone", union_monotonicity},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %s: %s (%s; %.1fs)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
