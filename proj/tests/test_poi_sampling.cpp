#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isoswarm/errors.hpp"
#include "isoswarm/poi_sampling.hpp"

using namespace isoswarm;

namespace {

double ks_statistic_uniform(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, std::max((i + 1) / n - u[i], u[i] - i / n));
  }
  return d;
}

}  // namespace

TEST_CASE("single point lands inside the unit sphere") {
  const auto set = sample_pois(UncertaintyEllipsoid::sphere(1.0), 1, 42);
  REQUIRE(set.size() == 1);
  CHECK(norm(set.points[0]) <= 1.0);
  CHECK(set.seed == 42);
}

TEST_CASE("every point satisfies the ellipsoid inequality") {
  const UncertaintyEllipsoid e{{10, -20, 5}, {3, 7, 0.5}};
  const auto set = sample_pois(e, 5000, 9);
  for (const auto& p : set.points) CHECK(e.quadratic_form(p) <= 1.0 + 1e-12);
}

TEST_CASE("fraction inside half radius matches the volume ratio") {
  const auto set = sample_pois(UncertaintyEllipsoid::sphere(100.0), 5000, 3);
  std::size_t inner = 0;
  for (const auto& p : set.points) {
    CHECK(norm(p) <= 100.0 + 1e-9);
    inner += norm(p) <= 50.0;
  }
  CHECK(std::fabs(static_cast<double>(inner) / 5000.0 - 0.125) <= 0.02);
}

TEST_CASE("sampling is deterministic per seed") {
  const auto e = UncertaintyEllipsoid::sphere(100.0);
  const auto a = sample_pois(e, 500, 7);
  const auto b = sample_pois(e, 500, 7);
  const auto c = sample_pois(e, 500, 8);
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
}

TEST_CASE("cubed radius is uniform (KS test over seeds)") {
  int passing = 0;
  for (unsigned seed = 0; seed < 40; ++seed) {
    const auto set = sample_pois(UncertaintyEllipsoid::sphere(1.0), 5000, seed);
    std::vector<double> u;
    for (const auto& p : set.points) u.push_back(std::pow(norm(p), 3));
    passing += ks_statistic_uniform(u) < 0.03;
  }
  CHECK(passing >= 38);
}

TEST_CASE("anisotropic radii stretch each axis") {
  const UncertaintyEllipsoid e{{0, 0, 0}, {2, 1, 1}};
  const auto set = sample_pois(e, 10000, 21);
  double sx = 0, sy = 0;
  for (const auto& p : set.points) {
    sx += (p.x / 2) * (p.x / 2);
    sy += p.y * p.y;
  }
  CHECK(sx / sy == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(sample_pois(UncertaintyEllipsoid::sphere(1.0), 0, 1), EmptySetError);
  CHECK_THROWS_AS(sample_pois(UncertaintyEllipsoid{{0, 0, 0}, {1, 0, 1}}, 10, 1), ParameterError);
  CHECK_THROWS_AS(sample_pois(UncertaintyEllipsoid{{0, 0, 0}, {1, -2, 1}}, 10, 1), ParameterError);
}

TEST_CASE("POI files round-trip exactly") {
  const auto set = sample_pois(UncertaintyEllipsoid{{1.5, -2, 3}, {10, 20, 30}}, 300, 77);
  std::stringstream ss;
  write_poi_csv(ss, set);
  const auto text = ss.str();
  CHECK(text.rfind("# isoswarm-pois v1 seed=77 ", 0) == 0);
  const auto back = read_poi_csv(ss);
  CHECK(back.points == set.points);
  CHECK(back.seed == 77);
  CHECK(back.ellipsoid.radii == set.ellipsoid.radii);
  CHECK(back.ellipsoid.center == set.ellipsoid.center);
}

TEST_CASE("malformed POI files report the line") {
  std::stringstream bad("# isoswarm-pois v1 seed=1 center=0,0,0 radii=1,1,1 n=2\nx,y,z\n0,0,0\n1,oops,0\n");
  try {
    read_poi_csv(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  std::stringstream short_file("# isoswarm-pois v1 seed=1 center=0,0,0 radii=1,1,1 n=3\nx,y,z\n0,0,0\n");
  CHECK_THROWS_AS(read_poi_csv(short_file), ParseError);
}
