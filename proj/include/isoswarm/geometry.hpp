// Conal field-of-view geometry.
//
// A spacecraft camera is modelled as a right circular cone whose apex sits
// at the spacecraft position and whose axis points at the center of the
// uncertainty ellipsoid. A POI is visible when it lies inside the forward
// nappe of that cone and in the half-space of the ellipsoid facing the
// spacecraft (the far hemisphere is culled).
#pragma once

#include <numbers>

#include "isoswarm/vector3.hpp"

namespace isoswarm {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Maps any finite angle onto [0, 2*pi).
double wrap_angle(double theta);

// Unit vector of `v`; throws DegenerateGeometryError for a zero vector.
Vector3 normalized(const Vector3& v);

// Unit direction from `apex` toward `ellipsoid_center`.
Vector3 cone_axis(const Vector3& apex, const Vector3& ellipsoid_center);

class ConeFov {
 public:
  // Validates 0 < phi < pi, 0 < nu < pi and wraps theta into [0, 2*pi).
  // The axis is fixed to point from `apex` at `ellipsoid_center`.
  static ConeFov toward(const Vector3& apex, const Vector3& ellipsoid_center,
                        double aperture_phi, double theta, double nu);

  // Uses nu = phi / 2.
  static ConeFov toward(const Vector3& apex, const Vector3& ellipsoid_center,
                        double aperture_phi, double theta = 0.0);

  const Vector3& apex() const noexcept { return apex_; }
  const Vector3& axis() const noexcept { return axis_; }
  double aperture_phi() const noexcept { return aperture_phi_; }
  double angular_position_theta() const noexcept { return theta_; }
  double angular_halfwidth_nu() const noexcept { return nu_; }
  // tan(phi / 2), cached.
  double half_aperture_tan() const noexcept { return half_tan_; }

 private:
  ConeFov() = default;

  Vector3 apex_;
  Vector3 axis_;
  double aperture_phi_ = 0.0;
  double theta_ = 0.0;
  double nu_ = 0.0;
  double half_tan_ = 0.0;
};

// Signed projection of (poi - apex) on the cone axis, km.
inline double axial_distance(const Vector3& poi, const ConeFov& fov) {
  return dot(poi - fov.apex(), fov.axis());
}

// Cone radius d * tan(phi / 2) at axial distance d >= 0.
double cone_radius_at(double d, double aperture_phi);

// Distance of the POI from the cone axis line, km.
inline double orthogonal_distance(const Vector3& poi, const ConeFov& fov) {
  const Vector3 rel = poi - fov.apex();
  const double d = dot(rel, fov.axis());
  return norm(rel - d * fov.axis());
}

// Forward-nappe containment; the cone surface counts as inside.
inline bool in_fov(const Vector3& poi, const ConeFov& fov) {
  const Vector3 rel = poi - fov.apex();
  const double d = dot(rel, fov.axis());
  if (!(d > 0.0)) return false;
  return norm(rel - d * fov.axis()) <= d * fov.half_aperture_tan();
}

// True when the POI is on the spacecraft side of the plane through `center`
// normal to (apex - center). Points on the plane count as visible.
bool in_near_hemisphere(const Vector3& poi, const Vector3& apex, const Vector3& center);

inline bool visible(const Vector3& poi, const ConeFov& fov, const Vector3& center) {
  return in_fov(poi, fov) && in_near_hemisphere(poi, fov.apex(), center);
}

}  // namespace isoswarm
