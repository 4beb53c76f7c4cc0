// Uniform-by-volume sampling of points of interest inside an ellipsoid.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "isoswarm/vector3.hpp"

namespace isoswarm {

// Axis-aligned ellipsoid; equal radii describe a sphere.
struct UncertaintyEllipsoid {
  Vector3 center;
  Vector3 radii{1.0, 1.0, 1.0};

  static UncertaintyEllipsoid sphere(double radius, const Vector3& center = {});

  // Throws ParameterError unless all radii are finite and positive.
  void validate() const;
  // Normalized quadratic form sum(((p - c)_k / r_k)^2); <= 1 inside.
  double quadratic_form(const Vector3& p) const;
  bool is_sphere() const { return radii.x == radii.y && radii.y == radii.z; }
};

struct PoiSet {
  std::vector<Vector3> points;
  std::uint64_t seed = 0;
  UncertaintyEllipsoid ellipsoid;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// Draws `n` points uniformly inside `ellipsoid` using the stream `seed`.
// Each point is center + radii .* (u^(1/3) * dir) with dir a normalized
// Gaussian triple and u uniform on [0, 1).
PoiSet sample_pois(const UncertaintyEllipsoid& ellipsoid, std::size_t n, std::uint64_t seed);

// Columnar text format:
//   # isoswarm-pois v1 seed=<u64> center=<x>,<y>,<z> radii=<a>,<b>,<c> n=<count>
//   x,y,z
//   <x>,<y>,<z>           (one row per point, 17 significant digits)
void write_poi_csv(std::ostream& out, const PoiSet& pois);
void write_poi_csv(const std::filesystem::path& path, const PoiSet& pois);
PoiSet read_poi_csv(std::istream& in);
PoiSet read_poi_csv(const std::filesystem::path& path);

}  // namespace isoswarm
