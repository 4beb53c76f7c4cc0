#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "isoswarm/encounter_bound.hpp"
#include "isoswarm/errors.hpp"
#include "isoswarm/experiments.hpp"
#include "isoswarm/information_cost.hpp"
#include "isoswarm/poi_sampling.hpp"
#include "isoswarm/swarm_optimizer.hpp"
#include "isoswarm/text_io.hpp"

namespace isoswarm::cli {

namespace fs = std::filesystem;

namespace {

// Distinguishes configuration mistakes (exit 2) from failures during the
// computation itself (exit 3).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format = "json";
  std::size_t threads = 1;
};

void require_input_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw UsageError(what + " is required");
  if (!fs::is_regular_file(path)) throw UsageError(what + " '" + path + "' does not exist or is not a file");
}

// Output file: its directory must exist and the file must be creatable.
void require_output_file(const std::string& path) {
  if (path.empty()) throw UsageError("--output is required");
  const fs::path p(path);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::is_directory(dir)) throw UsageError("output directory '" + dir.string() + "' does not exist");
  if (fs::is_directory(p)) throw UsageError("output path '" + path + "' is a directory");
  std::ofstream probe(p, std::ios::app);
  if (!probe) throw UsageError("output path '" + path + "' is not writable");
}

void require_output_dir(const std::string& path) {
  if (path.empty()) throw UsageError("--output directory is required");
  std::error_code ec;
  fs::create_directories(path, ec);
  if (!fs::is_directory(path)) throw UsageError("cannot create output directory '" + path + "'");
  const fs::path probe_path = fs::path(path) / ".isoswarm_write_probe";
  {
    std::ofstream probe(probe_path);
    if (!probe) throw UsageError("output directory '" + path + "' is not writable");
  }
  fs::remove(probe_path, ec);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string cost_csv(const CostBreakdown& b) {
  return "kappa_total,epsilon_pct,info_cost,visible_count,n_pois\n" + format_double(b.kappa_total) + "," +
         format_double(b.coverage_percentage()) + "," + format_double(b.information_cost) + "," +
         std::to_string(b.visible_count) + "," + std::to_string(b.n_pois) + "\n";
}

SwarmConfig load_swarm(const std::string& swarm_path, const PoiSet& pois) {
  SwarmConfig swarm{read_swarm_csv(fs::path(swarm_path)), pois.ellipsoid};
  try {
    swarm.validate();
  } catch (const Error& ex) {
    throw UsageError(std::string("invalid swarm: ") + ex.what());
  }
  return swarm;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Swarm positioning around an uncertainty ellipsoid", "isoswarm"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Random seed (u64)");
  app.add_option("-o,--output", global.output, "Output path (file or directory, per subcommand)");
  app.add_option("--format", global.format, "Stdout format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", global.threads, "Worker threads for experiments")->check(CLI::Range(1, 1024));

  // sample-pois
  auto* sample = app.add_subcommand("sample-pois", "Sample POIs uniformly inside an ellipsoid");
  double radius = 0.0;
  std::vector<double> radii, center{0.0, 0.0, 0.0};
  std::size_t n_points = 0;
  auto* radius_opt = sample->add_option("--radius", radius, "Sphere radius (km)");
  auto* radii_opt = sample->add_option("--radii", radii, "Ellipsoid radii a,b,c (km)")->delimiter(',')->expected(3);
  radius_opt->excludes(radii_opt);
  sample->add_option("--center", center, "Ellipsoid center x,y,z (km)")->delimiter(',')->expected(3);
  sample->add_option("--n", n_points, "Number of POIs")->required();

  // cost
  auto* cost = app.add_subcommand("cost", "Evaluate the information cost of a swarm");
  std::string pois_path, swarm_path;
  CostOptions cost_options;
  bool raw_count = false;
  cost->add_option("--pois", pois_path, "POI file")->required();
  cost->add_option("--swarm", swarm_path, "Swarm pose file")->required();
  cost->add_option("--delta", cost_options.identical_theta_delta, "Separation for identical orientations (rad)");
  cost->add_option("--kappa-weight", cost_options.kappa_weight, "Weight on kappa_total");
  cost->add_flag("--raw-count", raw_count, "Use the visible POI count instead of the percentage");

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Optimize swarm positions and orientations");
  NelderMeadOptions nm;
  double expected_stddev = -1.0;
  std::size_t expected_samples = 32;
  bool write_trace = false;
  optimize->add_option("--pois", pois_path, "POI file")->required();
  optimize->add_option("--swarm", swarm_path, "Initial swarm pose file")->required();
  optimize->add_option("--max-iterations", nm.max_iterations, "Iteration cap (0 = 200 * dimension)");
  optimize->add_option("--max-evaluations", nm.max_evaluations, "Objective evaluation cap (0 = none)");
  optimize->add_option("--f-tol", nm.f_tolerance, "Objective spread tolerance");
  optimize->add_option("--x-tol", nm.x_tolerance, "Simplex diameter tolerance");
  optimize->add_option("--simplex-scale", nm.initial_simplex_scale, "Initial simplex relative scale");
  optimize->add_option("--delta", cost_options.identical_theta_delta, "Separation for identical orientations (rad)");
  optimize->add_option("--kappa-weight", cost_options.kappa_weight, "Weight on kappa_total");
  optimize->add_option("--expected-stddev", expected_stddev, "Minimize E[I] under Gaussian position noise (km)");
  optimize->add_option("--samples", expected_samples, "Monte Carlo samples for E[I]");
  optimize->add_flag("--trace", write_trace, "Write <output>.trace.csv with per-iteration progress");

  // bound
  auto* bound = app.add_subcommand("bound", "Evaluate the encounter probability bound");
  std::string bound_config_path;
  std::optional<double> distance_override, time_override, v0_override, invert_p;
  bool squared = false;
  bound->add_option("--config", bound_config_path, "Contraction parameter + noise profile JSON")->required();
  bound->add_option("--distance", distance_override, "Failure distance D (km)");
  bound->add_option("--time", time_override, "Evaluation time t (s)");
  bound->add_option("--v0", v0_override, "E[V(0)]");
  bound->add_option("--invert", invert_p, "Print the radius certifying success probability p");
  bound->add_flag("--squared-distance", squared, "Use D^2 in the denominator");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo campaign");
  std::string experiment_config_path;
  experiment->add_option("--config", experiment_config_path, "Experiment JSON")->required();

  std::vector<std::string> argv_store{"isoswarm"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  if (*seed_opt) global.seed = seed_value;

  try {
    if (*sample) {
      if (!*radius_opt && !*radii_opt) throw UsageError("one of --radius or --radii is required");
      if (n_points == 0) throw UsageError("--n must be at least 1");
      require_output_file(global.output);
      UncertaintyEllipsoid e;
      e.center = {center[0], center[1], center[2]};
      e.radii = *radius_opt ? Vector3{radius, radius, radius} : Vector3{radii[0], radii[1], radii[2]};
      try {
        e.validate();
      } catch (const ParameterError& ex) {
        throw UsageError(ex.what());
      }
      const PoiSet pois = sample_pois(e, n_points, global.seed.value_or(0));
      write_poi_csv(fs::path(global.output), pois);
      out << "wrote " << pois.size() << " POIs to " << global.output << " (seed " << pois.seed << ", center "
          << format_vector(e.center) << ", radii " << format_vector(e.radii) << ")\n";
      return kExitOk;
    }

    if (*cost) {
      require_input_file(pois_path, "--pois");
      require_input_file(swarm_path, "--swarm");
      if (!global.output.empty()) require_output_file(global.output);
      if (raw_count) cost_options.coverage_mode = CoverageMode::kRawCount;
      const PoiSet pois = read_poi_csv(fs::path(pois_path));
      const SwarmConfig swarm = load_swarm(swarm_path, pois);
      const auto breakdown = information_cost(swarm, pois, cost_options);
      const std::string text = global.format == "csv" ? cost_csv(breakdown) : cost_breakdown_json(breakdown) + "\n";
      out << text;
      if (!global.output.empty()) write_text(global.output, text);
      return kExitOk;
    }

    if (*optimize) {
      require_input_file(pois_path, "--pois");
      require_input_file(swarm_path, "--swarm");
      require_output_file(global.output);
      try {
        nm.validate();
      } catch (const ParameterError& ex) {
        throw UsageError(ex.what());
      }
      const PoiSet pois = read_poi_csv(fs::path(pois_path));
      const SwarmConfig initial = load_swarm(swarm_path, pois);
      const CostMode mode = expected_stddev >= 0.0
                                ? CostMode::expectation(expected_stddev, expected_samples, global.seed.value_or(0))
                                : CostMode::deterministic();

      std::ostringstream trace_text;
      TraceCallback trace;
      if (write_trace) {
        trace_text << "iteration,best_value,simplex_diameter,evaluations\n";
        trace = [&](const IterationTrace& t) {
          trace_text << t.iteration << ',' << format_double(t.best_value) << ',' << format_double(t.simplex_diameter)
                     << ',' << t.evaluation_count << '\n';
        };
      }
      const auto result = optimize_swarm(pois, initial.size(), initial, nm, mode, cost_options, trace);
      write_swarm_csv(fs::path(global.output), result.swarm.spacecraft);
      if (write_trace) write_text(global.output + ".trace.csv", trace_text.str());
      out << (global.format == "csv" ? cost_csv(result.breakdown) : cost_breakdown_json(result.breakdown) + "\n");
      err << "iterations " << result.optimizer.iterations << ", evaluations " << result.optimizer.evaluation_count
          << (result.optimizer.converged ? ", converged" : ", stopped at limit") << '\n';
      return kExitOk;
    }

    if (*bound) {
      require_input_file(bound_config_path, "--config");
      if (!global.output.empty()) require_output_file(global.output);
      BoundConfig cfg;
      try {
        cfg = load_bound_config(bound_config_path);
      } catch (const ConfigError& ex) {
        throw UsageError(ex.what());
      }
      if (distance_override) cfg.distance = *distance_override;
      if (time_override) cfg.time = *time_override;
      if (v0_override) cfg.v0_expected = *v0_override;
      const BoundOptions options{squared ? DistanceMode::kSquared : DistanceMode::kLinear};

      std::string text;
      if (invert_p) {
        const double d =
            radius_for_success_probability(*invert_p, cfg.time, cfg.v0_expected, cfg.params, cfg.noise, options);
        if (global.format == "csv") {
          text = "p_target,radius_km\n" + format_double(*invert_p) + "," + format_double(d) + "\n";
        } else {
          nlohmann::ordered_json j{{"p_target", *invert_p}, {"radius_km", d}};
          text = j.dump(2) + "\n";
        }
      } else {
        const auto r = evaluate_bound(cfg.distance, cfg.time, cfg.v0_expected, cfg.params, cfg.noise, options);
        if (global.format == "csv") {
          text = "failure_prob_upper,success_prob_lower,failure_raw,success_raw,c_s,zeta_integral,m_lower_combined\n" +
                 format_double(r.failure_prob_upper) + "," + format_double(r.success_prob_lower) + "," +
                 format_double(r.failure_raw) + "," + format_double(r.success_raw) + "," + format_double(r.c_s) +
                 "," + format_double(r.zeta_integral) + "," + format_double(r.m_lower_combined) + "\n";
        } else {
          text = bound_result_json(r) + "\n";
        }
      }
      out << text;
      if (!global.output.empty()) write_text(global.output, text);
      return kExitOk;
    }

    if (*experiment) {
      require_input_file(experiment_config_path, "--config");
      require_output_dir(global.output);
      ExperimentConfig cfg;
      try {
        cfg = load_experiment_config(experiment_config_path);
      } catch (const ConfigError& ex) {
        throw UsageError(ex.what());
      }
      ExperimentReport report;
      if (auto* vp = std::get_if<ViewProbabilityConfig>(&cfg)) {
        if (global.seed) vp->master_seed = *global.seed;
        vp->threads = global.threads;
        report = run_view_probability(*vp);
      } else {
        auto& ss = std::get<SwarmSizeConfig>(cfg);
        if (global.seed) ss.master_seed = *global.seed;
        ss.threads = global.threads;
        report = run_swarm_size_sweep(ss);
      }
      write_text(fs::path(global.output) / "report.json", report_json(report) + "\n");
      write_text(fs::path(global.output) / "summary.csv", summary_csv(report));

      for (const auto& cell : aggregate(report)) {
        if (report.kind == ExperimentKind::kViewProbability) {
          out << "radius " << cell.sphere_radius << ": p = " << cell.success_pct << "% (" << cell.successes << "/"
              << cell.trials << "), mean coverage " << cell.mean_coverage_pct << "%\n";
        } else {
          out << "N = " << cell.n_spacecraft << ": coverage " << cell.mean_coverage_pct << "% (sd "
              << cell.std_coverage_pct << "), -I " << cell.mean_neg_info_cost << "\n";
        }
      }
      out << "wrote " << (fs::path(global.output) / "report.json").string() << " and "
          << (fs::path(global.output) / "summary.csv").string() << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}

}  // namespace isoswarm::cli
