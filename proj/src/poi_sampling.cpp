#include "isoswarm/poi_sampling.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "isoswarm/errors.hpp"
#include "isoswarm/rng.hpp"
#include "isoswarm/text_io.hpp"

namespace isoswarm {

UncertaintyEllipsoid UncertaintyEllipsoid::sphere(double radius, const Vector3& center) {
  UncertaintyEllipsoid e{center, {radius, radius, radius}};
  e.validate();
  return e;
}

void UncertaintyEllipsoid::validate() const {
  if (!is_finite(center)) throw ParameterError("ellipsoid center must be finite");
  for (double r : {radii.x, radii.y, radii.z}) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ParameterError("ellipsoid radii must be finite and positive");
    }
  }
}

double UncertaintyEllipsoid::quadratic_form(const Vector3& p) const {
  const Vector3 d = p - center;
  const double qx = d.x / radii.x;
  const double qy = d.y / radii.y;
  const double qz = d.z / radii.z;
  return qx * qx + qy * qy + qz * qz;
}

PoiSet sample_pois(const UncertaintyEllipsoid& ellipsoid, std::size_t n, std::uint64_t seed) {
  ellipsoid.validate();
  if (n == 0) throw EmptySetError("cannot sample an empty POI set (n = 0)");

  PoiSet set;
  set.seed = seed;
  set.ellipsoid = ellipsoid;
  set.points.reserve(n);

  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector3 dir = rng.unit_vector();
    const double r = std::cbrt(rng.uniform());
    const Vector3 unit = dir * r;
    set.points.push_back({ellipsoid.center.x + ellipsoid.radii.x * unit.x,
                          ellipsoid.center.y + ellipsoid.radii.y * unit.y,
                          ellipsoid.center.z + ellipsoid.radii.z * unit.z});
  }
  return set;
}

void write_poi_csv(std::ostream& out, const PoiSet& pois) {
  const auto& e = pois.ellipsoid;
  out << "# isoswarm-pois v1 seed=" << pois.seed << " center=" << format_vector(e.center)
      << " radii=" << format_vector(e.radii) << " n=" << pois.size() << '\n';
  out << "x,y,z\n";
  for (const auto& p : pois.points) out << format_vector(p) << '\n';
}

void write_poi_csv(const std::filesystem::path& path, const PoiSet& pois) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_poi_csv(out, pois);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

namespace {

std::string header_value(const std::string& header, const std::string& key, std::size_t line) {
  const std::string needle = " " + key + "=";
  const auto pos = header.find(needle);
  if (pos == std::string::npos) throw ParseError("POI header is missing '" + key + "'", line);
  const auto start = pos + needle.size();
  const auto end = header.find(' ', start);
  return header.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

PoiSet read_poi_csv(std::istream& in) {
  PoiSet set;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError("empty POI file", 1);
  ++line_no;
  if (line.rfind("# isoswarm-pois", 0) != 0) {
    throw ParseError("POI file must start with '# isoswarm-pois'", line_no);
  }
  set.seed = parse_u64(header_value(line, "seed", line_no), line_no);
  set.ellipsoid.center = parse_vector(header_value(line, "center", line_no), line_no);
  set.ellipsoid.radii = parse_vector(header_value(line, "radii", line_no), line_no);
  const std::size_t declared = parse_u64(header_value(line, "n", line_no), line_no);
  try {
    set.ellipsoid.validate();
  } catch (const ParameterError& ex) {
    throw ParseError(ex.what(), line_no);
  }

  if (!std::getline(in, line)) throw ParseError("missing column header", line_no + 1);
  ++line_no;
  if (trim(line) != "x,y,z") throw ParseError("expected column header 'x,y,z'", line_no);

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    set.points.push_back(parse_vector(line, line_no));
  }
  if (set.points.size() != declared) {
    throw ParseError("header declares n=" + std::to_string(declared) + " but file has " +
                         std::to_string(set.points.size()) + " rows",
                     line_no);
  }
  return set;
}

PoiSet read_poi_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_poi_csv(in);
}

}  // namespace isoswarm
