#include "isoswarm/encounter_bound.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "isoswarm/errors.hpp"

namespace isoswarm {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(name) + " must be positive and finite");
}

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be non-negative and finite");
  }
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void ContractionParams::validate() const {
  require_positive(alpha_c, "alpha_c");
  require_positive(alpha_e, "alpha_e");
  require_positive(m_c_lower, "m_c_lower");
  require_positive(m_c_upper, "m_c_upper");
  require_positive(m_e_lower, "m_e_lower");
  require_positive(m_e_upper, "m_e_upper");
  require_non_negative(eps_c, "eps_c");
  require_non_negative(eps_e, "eps_e");
  require_non_negative(g_bar, "g_bar");
  require_non_negative(u_bar, "u_bar");
  require_non_negative(h_bar, "h_bar");
  require_non_negative(ell_bar, "ell_bar");
  require_positive(gamma_c, "gamma_c");
  require_positive(lambda, "lambda");
  require_positive(alpha_s, "alpha_s");
  if (m_c_lower > m_c_upper) throw ParameterError("m_c_lower must not exceed m_c_upper");
  if (m_e_lower > m_e_upper) throw ParameterError("m_e_lower must not exceed m_e_upper");
}

NoiseProfile NoiseProfile::constant(double zeta, double t_end, std::size_t intervals) {
  if (intervals == 0) throw ParameterError("noise profile needs at least one interval");
  NoiseProfile p;
  p.samples.reserve(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    p.samples.push_back({t_end * static_cast<double>(k) / static_cast<double>(intervals), zeta});
  }
  p.validate();
  return p;
}

void NoiseProfile::validate() const {
  if (samples.empty()) throw ParameterError("noise profile is empty");
  if (samples.front().t != 0.0) throw ParameterError("noise profile must start at t = 0");
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!std::isfinite(samples[k].t) || !std::isfinite(samples[k].zeta)) {
      throw ParameterError("noise profile entries must be finite");
    }
    if (samples[k].zeta < 0.0) throw ParameterError("noise profile zeta must be non-negative");
    if (k > 0 && !(samples[k].t > samples[k - 1].t)) {
      throw ParameterError("noise profile times must be strictly increasing");
    }
  }
}

double NoiseProfile::zeta_at(double t) const {
  if (samples.empty()) throw ParameterError("noise profile is empty");
  if (t < 0.0) throw DomainError("time must be non-negative");
  if (t > end_time()) {
    throw ExtrapolationError("time " + std::to_string(t) + " s lies beyond the noise profile end " +
                             std::to_string(end_time()) + " s");
  }
  const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                   [](double v, const NoiseSample& s) { return v < s.t; });
  if (it == samples.end()) return samples.back().zeta;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.zeta + w * (hi.zeta - lo.zeta);
}

RateMatrixCheck check_rate_matrix(const ContractionParams& p) {
  p.validate();
  RateMatrixCheck r;
  r.alpha_bar_c = p.alpha_c * p.m_c_lower - 0.5 * p.gamma_c;
  r.alpha_bar_e = p.alpha_e * p.m_e_lower - p.m_e_upper * p.eps_e * p.h_bar;

  const double a11 = -2.0 * r.alpha_bar_c + 2.0 * p.alpha_s * p.m_c_upper;
  const double a22 = -2.0 * p.lambda * r.alpha_bar_e + 2.0 * p.alpha_s * p.lambda * p.m_e_upper;
  const double off = p.m_c_upper * p.g_bar * p.u_bar;
  r.trace = a11 + a22;
  r.determinant = a11 * a22 - off * off;

  if (!(r.alpha_bar_c > 0.0)) {
    r.violated = "alpha_c*m_c_lower - gamma_c/2 must be positive (controller contraction margin)";
  } else if (!(r.alpha_bar_e > 0.0)) {
    r.violated = "alpha_e*m_e_lower - m_e_upper*eps_e*h_bar must be positive (estimator contraction margin)";
  } else if (r.trace > 0.0) {
    r.violated = "rate matrix shifted by 2*alpha_s*diag(m_c_upper, lambda*m_e_upper) has positive trace";
  } else if (r.determinant < 0.0) {
    r.violated = "rate matrix shifted by 2*alpha_s*diag(m_c_upper, lambda*m_e_upper) has negative determinant";
  }
  r.feasible = r.violated.empty();
  return r;
}

double steady_state_constant(const ContractionParams& p) {
  const double b = p.m_c_upper * p.g_bar * p.eps_c;
  return b * b / (2.0 * p.alpha_s * p.gamma_c);
}

double combined_metric_lower(const ContractionParams& p) { return p.m_c_lower + p.lambda * p.m_e_lower; }

double zeta_integral(double t, const ContractionParams& params, const NoiseProfile& noise) {
  params.validate();
  noise.validate();
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  if (t > noise.end_time()) {
    throw ExtrapolationError("time " + std::to_string(t) + " s lies beyond the noise profile end " +
                             std::to_string(noise.end_time()) + " s");
  }
  const double rate = 2.0 * params.alpha_s;
  auto integrand = [rate](double tau, double zeta) { return std::exp(rate * tau) * zeta; };

  double sum = 0.0;
  const auto& s = noise.samples;
  for (std::size_t k = 0; k + 1 < s.size() && s[k].t < t; ++k) {
    const double t_hi = std::min(s[k + 1].t, t);
    const double z_hi = t_hi == s[k + 1].t ? s[k + 1].zeta : noise.zeta_at(t_hi);
    sum += 0.5 * (t_hi - s[k].t) * (integrand(s[k].t, s[k].zeta) + integrand(t_hi, z_hi));
  }
  return params.lambda * params.m_e_upper * params.ell_bar * sum;
}

double bound_numerator(double t, double v0_expected, const ContractionParams& params, const NoiseProfile& noise) {
  if (!(v0_expected >= 0.0) || !std::isfinite(v0_expected)) {
    throw DomainError("E[V(0)] must be finite and non-negative");
  }
  const double decay = std::exp(-2.0 * params.alpha_s * t);
  return v0_expected * decay + steady_state_constant(params) + decay * zeta_integral(t, params, noise);
}

namespace {

void require_feasible(const ContractionParams& params) {
  const auto check = check_rate_matrix(params);
  if (!check.feasible) throw FeasibilityError("infeasible contraction parameters: " + check.violated);
}

double denominator(double distance, double m, DistanceMode mode) {
  return mode == DistanceMode::kSquared ? distance * distance * m : distance * m;
}

}  // namespace

BoundResult evaluate_bound(double distance, double t, double v0_expected, const ContractionParams& params,
                           const NoiseProfile& noise, const BoundOptions& options) {
  if (!(distance > 0.0) || !std::isfinite(distance)) throw DomainError("failure distance D must be positive");
  require_feasible(params);

  BoundResult r;
  r.c_s = steady_state_constant(params);
  r.zeta_integral = zeta_integral(t, params, noise);
  r.m_lower_combined = combined_metric_lower(params);
  r.numerator = bound_numerator(t, v0_expected, params, noise);

  const double den = denominator(distance, r.m_lower_combined, options.distance_mode);
  r.failure_raw = r.numerator / den;
  r.success_raw = (den - r.numerator) / den;
  r.failure_prob_upper = clamp01(r.failure_raw);
  r.success_prob_lower = clamp01(r.success_raw);
  return r;
}

double failure_probability_bound(double distance, double t, double v0_expected, const ContractionParams& params,
                                 const NoiseProfile& noise, const BoundOptions& options) {
  return evaluate_bound(distance, t, v0_expected, params, noise, options).failure_prob_upper;
}

double success_probability(double distance, double t, double v0_expected, const ContractionParams& params,
                           const NoiseProfile& noise, const BoundOptions& options) {
  return evaluate_bound(distance, t, v0_expected, params, noise, options).success_prob_lower;
}

double radius_for_success_probability(double p_target, double t, double v0_expected,
                                      const ContractionParams& params, const NoiseProfile& noise,
                                      const BoundOptions& options) {
  if (!std::isfinite(p_target)) throw DomainError("target probability must be finite");
  if (p_target >= 1.0) {
    throw UnattainableError("the bound never certifies success probability 1 (requested " +
                            std::to_string(p_target) + ")");
  }
  if (!(p_target > 0.0)) throw DomainError("target probability must lie in (0, 1)");
  require_feasible(params);

  const double b = bound_numerator(t, v0_expected, params, noise);
  const double scaled = b / ((1.0 - p_target) * combined_metric_lower(params));
  return options.distance_mode == DistanceMode::kSquared ? std::sqrt(scaled) : scaled;
}

UncertaintyEllipsoid ellipsoid_from_radius(double distance, const Vector3& w, const Vector3& center) {
  UncertaintyEllipsoid e{center, {distance * w.x, distance * w.y, distance * w.z}};
  e.validate();
  return e;
}

std::string bound_result_json(const BoundResult& r) {
  nlohmann::ordered_json j;
  j["failure_prob_upper"] = r.failure_prob_upper;
  j["success_prob_lower"] = r.success_prob_lower;
  j["failure_raw"] = r.failure_raw;
  j["success_raw"] = r.success_raw;
  j["c_s"] = r.c_s;
  j["zeta_integral"] = r.zeta_integral;
  j["m_lower_combined"] = r.m_lower_combined;
  j["numerator"] = r.numerator;
  return j.dump(2);
}

BoundConfig parse_bound_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ConfigError(std::string("bound config is not valid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw ConfigError("bound config must be a JSON object");

  BoundConfig cfg;
  auto& p = cfg.params;
  const std::map<std::string, double*> scalars = {
      {"alpha_c", &p.alpha_c},     {"alpha_e", &p.alpha_e},     {"m_c_lower", &p.m_c_lower},
      {"m_c_upper", &p.m_c_upper}, {"m_e_lower", &p.m_e_lower}, {"m_e_upper", &p.m_e_upper},
      {"eps_c", &p.eps_c},         {"eps_e", &p.eps_e},         {"g_bar", &p.g_bar},
      {"u_bar", &p.u_bar},         {"h_bar", &p.h_bar},         {"ell_bar", &p.ell_bar},
      {"gamma_c", &p.gamma_c},     {"lambda", &p.lambda},       {"alpha_s", &p.alpha_s},
      {"v0_expected", &cfg.v0_expected}, {"time", &cfg.time},   {"distance", &cfg.distance},
  };

  bool have_profile = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "schema_version") {
      if (!value.is_number_integer() || value.get<int>() != 1) {
        throw ConfigError("schema_version: expected 1");
      }
    } else if (key == "noise_profile") {
      if (!value.is_array()) throw ConfigError("noise_profile: expected an array of [t, zeta] pairs");
      for (const auto& pair : value) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
          throw ConfigError("noise_profile: every entry must be a [t, zeta] number pair");
        }
        cfg.noise.samples.push_back({pair[0].get<double>(), pair[1].get<double>()});
      }
      have_profile = true;
    } else if (auto it = scalars.find(key); it != scalars.end()) {
      if (!value.is_number()) throw ConfigError(key + ": expected a number");
      *it->second = value.get<double>();
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (!have_profile) throw ConfigError("noise_profile: missing");
  try {
    cfg.params.validate();
    cfg.noise.validate();
  } catch (const ParameterError& ex) {
    throw ConfigError(ex.what());
  }
  return cfg;
}

BoundConfig load_bound_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bound_config(ss.str());
}

}  // namespace isoswarm
