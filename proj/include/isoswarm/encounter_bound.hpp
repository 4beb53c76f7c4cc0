// Encounter-probability bound for a chief spacecraft under hierarchical
// (controller + estimator) stochastic contraction.
//
// With V0 = E[V(0)], the failure probability at distance D and time t is
//
//   P[|x - x_d| >= D] <= (V0 e^{-2 a_s t} + c_s + e^{-2 a_s t} Z(t)) / (D m)
//
//   c_s  = (mbar_c * g * eps_c)^2 / (2 a_s gamma_c)
//   Z(t) = lambda * mbar_e * ell * int_0^t e^{2 a_s tau} zeta(tau) dtau
//   m    = mlow_c + lambda * mlow_e
//
// and the success probability P[|p(T)| <= D] is bounded below by one minus
// the same ratio. The numerator is called B below.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "isoswarm/poi_sampling.hpp"

namespace isoswarm {

struct ContractionParams {
  double alpha_c = 1.0;  // controller contraction rate, 1/s
  double alpha_e = 1.0;  // estimator contraction rate, 1/s
  double m_c_lower = 1.0;
  double m_c_upper = 1.0;
  double m_e_lower = 1.0;
  double m_e_upper = 1.0;
  double eps_c = 0.0;  // control-policy approximation error bound
  double eps_e = 0.0;  // estimation-gain approximation error bound
  double g_bar = 0.0;
  double u_bar = 0.0;
  double h_bar = 0.0;
  double ell_bar = 0.0;  // bound on the squared Frobenius norm of the estimation gain
  double gamma_c = 1.0;
  double lambda = 1.0;
  double alpha_s = 0.1;

  // Rates, metric bounds, gamma_c, lambda and alpha_s must be positive; the
  // remaining bounds non-negative; lower <= upper for both metrics.
  void validate() const;
};

struct NoiseSample {
  double t = 0.0;     // s
  double zeta = 0.0;  // bound on |G|_F^2
};

// Piecewise-linear zeta(t) history starting at t = 0.
struct NoiseProfile {
  std::vector<NoiseSample> samples;

  static NoiseProfile constant(double zeta, double t_end, std::size_t intervals);
  void validate() const;
  double end_time() const { return samples.empty() ? 0.0 : samples.back().t; }
  // Linear interpolation; throws ExtrapolationError beyond end_time().
  double zeta_at(double t) const;
};

struct RateMatrixCheck {
  bool feasible = false;
  double alpha_bar_c = 0.0;  // alpha_c mlow_c - gamma_c / 2
  double alpha_bar_e = 0.0;  // alpha_e mlow_e - mbar_e eps_e h
  double trace = 0.0;        // of the alpha_s-shifted 2x2 rate matrix
  double determinant = 0.0;
  std::string violated;  // empty when feasible
};

// Checks alpha_bar_c > 0, alpha_bar_e > 0 and that
//   [[-2 abar_c, mbar_c g u], [mbar_c g u, -2 lambda abar_e]]
//     + 2 alpha_s diag(mbar_c, lambda mbar_e)
// is negative semidefinite.
RateMatrixCheck check_rate_matrix(const ContractionParams& params);

enum class DistanceMode {
  kLinear,   // denominator D * m
  kSquared,  // denominator D^2 * m
};

struct BoundOptions {
  DistanceMode distance_mode = DistanceMode::kLinear;
};

struct BoundResult {
  double failure_prob_upper = 0.0;  // clamped to [0, 1]
  double success_prob_lower = 0.0;  // clamped to [0, 1]
  double failure_raw = 0.0;
  double success_raw = 0.0;
  double c_s = 0.0;
  double zeta_integral = 0.0;
  double m_lower_combined = 0.0;
  double numerator = 0.0;  // B
};

double steady_state_constant(const ContractionParams& params);  // c_s
double combined_metric_lower(const ContractionParams& params);  // m

// Z(t) by the trapezoidal rule over the profile's nodes on [0, t].
double zeta_integral(double t, const ContractionParams& params, const NoiseProfile& noise);

// B = V0 e^{-2 a_s t} + c_s + e^{-2 a_s t} Z(t).
double bound_numerator(double t, double v0_expected, const ContractionParams& params,
                       const NoiseProfile& noise);

// Full evaluation at (D, t). Throws DomainError for D <= 0 or V0 < 0 and
// FeasibilityError when check_rate_matrix fails.
BoundResult evaluate_bound(double distance, double t, double v0_expected, const ContractionParams& params,
                           const NoiseProfile& noise, const BoundOptions& options = {});

double failure_probability_bound(double distance, double t, double v0_expected,
                                 const ContractionParams& params, const NoiseProfile& noise,
                                 const BoundOptions& options = {});

double success_probability(double distance, double t, double v0_expected, const ContractionParams& params,
                           const NoiseProfile& noise, const BoundOptions& options = {});

// Smallest D whose certified success probability reaches p_target.
double radius_for_success_probability(double p_target, double t, double v0_expected,
                                      const ContractionParams& params, const NoiseProfile& noise,
                                      const BoundOptions& options = {});

// Diagonal weighted-norm reading: radii = D * weights.
UncertaintyEllipsoid ellipsoid_from_radius(double distance, const Vector3& axis_weights,
                                           const Vector3& center = {});

std::string bound_result_json(const BoundResult& result);

// JSON config: flat scalars named as in ContractionParams plus
// "noise_profile": [[t, zeta], ...]. Optional "v0_expected", "time" and
// "distance" are returned through the out-structure. Unknown keys throw.
struct BoundConfig {
  ContractionParams params;
  NoiseProfile noise;
  double v0_expected = 0.0;
  double time = 0.0;
  double distance = 1.0;
};

BoundConfig parse_bound_config(const std::string& json_text);
BoundConfig load_bound_config(const std::filesystem::path& path);

}  // namespace isoswarm
