#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "isoswarm/experiments.hpp"

namespace fs = std::filesystem;
using isoswarm::cli::kExitComputation;
using isoswarm::cli::kExitOk;
using isoswarm::cli::kExitUsage;

namespace {

const fs::path kData = ISOSWARM_TEST_DATA_DIR;
const fs::path kConfigs = ISOSWARM_CONFIG_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = isoswarm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "isoswarm_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"nonsense"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"cost", "--pois", "/nonexistent.csv", "--swarm", "/nonexistent.csv"}).code == kExitUsage);
  CHECK(run({"--format", "xml", "cost"}).code == kExitUsage);
}

TEST_CASE("sample-pois") {
  const auto dir = scratch("sample");
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string(), c = (dir / "c.csv").string();
  auto r = run({"sample-pois", "--radius", "100", "--n", "5000", "--seed", "7", "-o", a});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("5000") != std::string::npos);
  CHECK(run({"--seed", "7", "-o", b, "sample-pois", "--radius", "100", "--n", "5000"}).code == kExitOk);
  CHECK(slurp(a) == slurp(b));

  std::istringstream lines(slurp(a));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 5002);

  CHECK(run({"sample-pois", "--radius", "100", "--n", "5000", "--seed", "8", "-o", c}).code == kExitOk);
  CHECK(slurp(a) != slurp(c));

  CHECK(run({"sample-pois", "--radius", "100", "--n", "0", "-o", c}).code == kExitUsage);
  CHECK(run({"sample-pois", "--radius", "-1", "--n", "5", "-o", c}).code == kExitUsage);
  CHECK(run({"sample-pois", "--n", "5", "-o", c}).code == kExitUsage);
  CHECK(run({"sample-pois", "--radius", "1", "--n", "5", "-o", "/nonexistent_dir/x.csv"}).code == kExitUsage);
  CHECK(run({"sample-pois", "--radii", "1,2,3", "--center", "5,5,5", "--n", "5", "-o", c}).code == kExitOk);
}

TEST_CASE("cost matches the golden breakdown") {
  const auto r = run({"cost", "--pois", (kData / "fixture_pois.csv").string(), "--swarm",
                      (kData / "fixture_swarm.csv").string()});
  REQUIRE(r.code == kExitOk);
  const auto got = nlohmann::json::parse(r.out);
  const auto want = nlohmann::json::parse(slurp(kData / "fixture_cost_golden.json"));
  CHECK(got.at("visible_count") == want.at("visible_count"));
  CHECK(got.at("n_pois") == want.at("n_pois"));
  CHECK(got.at("epsilon_pct").get<double>() == want.at("epsilon_pct").get<double>());
  CHECK(got.at("kappa_total").get<double>() == doctest::Approx(want.at("kappa_total").get<double>()).epsilon(1e-12));
  CHECK(got.at("info_cost").get<double>() == doctest::Approx(want.at("info_cost").get<double>()).epsilon(1e-12));

  const auto csv = run({"--format", "csv", "cost", "--pois", (kData / "fixture_pois.csv").string(), "--swarm",
                        (kData / "fixture_swarm.csv").string()});
  CHECK(csv.out.rfind("kappa_total,epsilon_pct,info_cost,visible_count,n_pois\n", 0) == 0);
}

TEST_CASE("cost toy scenes") {
  const auto dir = scratch("toy");
  // All POIs on the +x side; one wide cone from +x sees them all.
  write(dir / "pois.csv",
        "# isoswarm-pois v1 seed=0 center=0,0,0 radii=10,10,10 n=3\nx,y,z\n1,0,0\n5,2,-1\n3,-4,4\n");
  write(dir / "one.csv", "# isoswarm-swarm v1\nx,y,z,theta,nu,phi\n100,0,0,1,0.5,1.0471975511965976\n");
  auto r = run({"cost", "--pois", (dir / "pois.csv").string(), "--swarm", (dir / "one.csv").string()});
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out).at("info_cost").get<double>() == -100.0);

  write(dir / "twins.csv",
        "# isoswarm-swarm v1\nx,y,z,theta,nu,phi\n100,0,0,1,0.5,1e-12\n100,0,0,1,0.5,1e-12\n");
  r = run({"cost", "--pois", (dir / "pois.csv").string(), "--swarm", (dir / "twins.csv").string()});
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out).at("kappa_total").get<double>() == doctest::Approx(1.0 - 1e-6).epsilon(1e-14));

  write(dir / "bad.csv", "# isoswarm-swarm v1\nx,y,z,theta,nu,phi\n100,0,0,1,0.5,1\n100,0,zero,1,0.5,1\n");
  r = run({"cost", "--pois", (dir / "pois.csv").string(), "--swarm", (dir / "bad.csv").string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("line 4") != std::string::npos);
}

TEST_CASE("optimize") {
  const auto dir = scratch("optimize");
  const auto out = (dir / "final.csv").string();
  const auto r = run({"optimize", "--pois", (kData / "fixture_pois.csv").string(), "--swarm",
                      (kData / "fixture_swarm.csv").string(), "-o", out, "--max-iterations", "50", "--trace"});
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(out));
  CHECK(fs::exists(out + ".trace.csv"));
  const auto golden = nlohmann::json::parse(slurp(kData / "fixture_cost_golden.json"));
  CHECK(nlohmann::json::parse(r.out).at("info_cost").get<double>() <= golden.at("info_cost").get<double>());
  CHECK(run({"cost", "--pois", (kData / "fixture_pois.csv").string(), "--swarm", out}).code == kExitOk);
  CHECK(run({"optimize", "--pois", (kData / "fixture_pois.csv").string(), "--swarm",
             (kData / "fixture_swarm.csv").string(), "-o", out, "--f-tol", "-1"})
            .code == kExitUsage);
}

TEST_CASE("bound") {
  auto r = run({"bound", "--config", (kData / "bound_zero_noise.json").string()});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("success_prob_lower").get<double>() == 1.0);
  CHECK(j.at("failure_prob_upper").get<double>() == 0.0);

  r = run({"bound", "--config", (kData / "bound_b1_m2.json").string(), "--invert", "0.5"});
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out).at("radius_km").get<double>() == doctest::Approx(1.0).epsilon(1e-14));

  r = run({"bound", "--config", (kData / "bound_b1_m2.json").string(), "--time", "20"});
  CHECK(r.code == kExitComputation);
  CHECK(r.err.find("beyond") != std::string::npos);

  r = run({"bound", "--config", (kData / "bound_infeasible.json").string()});
  CHECK(r.code == kExitComputation);
  CHECK(r.err.find("controller contraction margin") != std::string::npos);

  r = run({"bound", "--config", (kData / "bound_b1_m2.json").string(), "--invert", "1"});
  CHECK(r.code == kExitComputation);

  CHECK(run({"bound", "--config", (kConfigs / "bound_example.json").string()}).code == kExitOk);
  const auto dir = scratch("bound");
  write(dir / "typo.json", R"({"alpha_c": 1, "alpah_e": 1, "noise_profile": [[0, 0]]})");
  r = run({"bound", "--config", (dir / "typo.json").string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("alpah_e") != std::string::npos);
}

TEST_CASE("experiment") {
  const auto dir = scratch("experiment");
  write(dir / "view.json", R"({"schema_version": 1, "experiment": "view_probability",
    "iso_terminal_position": [4.1784e7, -9.8402e7, -4.7133e7], "sphere_radii": [50, 500, 1000],
    "trials_per_radius": 2, "n_pois": 100, "optimizer": {"max_iterations": 20}})");
  const auto out = (dir / "run").string();
  auto r = run({"experiment", "--config", (dir / "view.json").string(), "-o", out, "--threads", "2"});
  REQUIRE(r.code == kExitOk);
  const auto summary = slurp(fs::path(out) / "summary.csv");
  std::istringstream lines(summary);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4);  // header + 3 radii
  const auto first = nlohmann::json::parse(slurp(fs::path(out) / "report.json"));

  const auto out2 = (dir / "run2").string();
  REQUIRE(run({"--seed", "99", "experiment", "--config", (dir / "view.json").string(), "-o", out2}).code == kExitOk);
  const auto second = nlohmann::json::parse(slurp(fs::path(out2) / "report.json"));
  CHECK(second.at("trials") != first.at("trials"));
  CHECK(second.at("trials").at(0).size() == first.at("trials").at(0).size());

  write(dir / "sweep.json", R"({"schema_version": 1, "experiment": "swarm_size", "n_pois": 100,
    "spacecraft_range": [1, 7], "trials": 1, "optimizer": {"max_iterations": 10}})");
  REQUIRE(run({"experiment", "--config", (dir / "sweep.json").string(), "-o", (dir / "sweep").string()}).code ==
          kExitOk);
  const auto table = slurp(dir / "sweep" / "summary.csv");
  CHECK(table.find("coverage_fraction") != std::string::npos);
  CHECK(table.find("neg_info_cost") != std::string::npos);

  write(dir / "bad.json", R"({"schema_version": 1, "experiment": "swarm_size", "trails": 3})");
  r = run({"experiment", "--config", (dir / "bad.json").string(), "-o", (dir / "bad").string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("trails") != std::string::npos);

  for (const char* name : {"experiment1.json", "experiment1_iso2.json", "experiment2.json"}) {
    CHECK_NOTHROW(isoswarm::load_experiment_config(kConfigs / name));
  }
}
