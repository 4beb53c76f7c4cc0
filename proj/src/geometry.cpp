#include "isoswarm/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "isoswarm/errors.hpp"

namespace isoswarm {

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) throw DomainError("angle must be finite");
  double wrapped = std::fmod(theta, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  // fmod of a tiny negative value can round back up to exactly 2*pi.
  if (wrapped >= kTwoPi) wrapped = 0.0;
  return wrapped;
}

Vector3 normalized(const Vector3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DegenerateGeometryError("cannot normalize a zero or non-finite vector");
  }
  return v * (1.0 / n);
}

Vector3 cone_axis(const Vector3& apex, const Vector3& ellipsoid_center) {
  const Vector3 delta = ellipsoid_center - apex;
  if (!(norm(delta) > 0.0)) {
    throw DegenerateGeometryError("cone apex coincides with the ellipsoid center");
  }
  return normalized(delta);
}

ConeFov ConeFov::toward(const Vector3& apex, const Vector3& ellipsoid_center,
                        double aperture_phi, double theta, double nu) {
  if (!is_finite(apex) || !is_finite(ellipsoid_center)) {
    throw DomainError("cone apex and ellipsoid center must be finite");
  }
  if (!(aperture_phi > 0.0 && aperture_phi < std::numbers::pi)) {
    throw ParameterError("aperture phi must lie in (0, pi), got " + std::to_string(aperture_phi));
  }
  if (!(nu > 0.0 && nu < std::numbers::pi)) {
    throw ParameterError("angular half-width nu must lie in (0, pi), got " + std::to_string(nu));
  }
  ConeFov fov;
  fov.apex_ = apex;
  fov.axis_ = cone_axis(apex, ellipsoid_center);
  fov.aperture_phi_ = aperture_phi;
  fov.theta_ = wrap_angle(theta);
  fov.nu_ = nu;
  fov.half_tan_ = std::tan(0.5 * aperture_phi);
  return fov;
}

ConeFov ConeFov::toward(const Vector3& apex, const Vector3& ellipsoid_center,
                        double aperture_phi, double theta) {
  return toward(apex, ellipsoid_center, aperture_phi, theta, 0.5 * aperture_phi);
}

double cone_radius_at(double d, double aperture_phi) {
  if (!(d >= 0.0)) {
    throw DomainError("cone radius is undefined behind the apex (d = " + std::to_string(d) + ")");
  }
  return d * std::tan(0.5 * aperture_phi);
}

bool in_near_hemisphere(const Vector3& poi, const Vector3& apex, const Vector3& center) {
  const Vector3 normal = apex - center;
  if (!(norm(normal) > 0.0)) {
    throw DegenerateGeometryError("hemisphere plane is undefined when apex equals center");
  }
  return dot(poi - center, normal) >= 0.0;
}

}  // namespace isoswarm
