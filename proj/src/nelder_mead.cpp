#include "isoswarm/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "isoswarm/errors.hpp"
#include "isoswarm/geometry.hpp"

namespace isoswarm {

void NelderMeadOptions::validate() const {
  if (!(reflection > 0.0)) throw ParameterError("reflection coefficient must be positive");
  if (!(expansion > 1.0)) throw ParameterError("expansion coefficient must exceed 1");
  if (!(contraction > 0.0 && contraction < 1.0)) throw ParameterError("contraction coefficient must lie in (0, 1)");
  if (!(shrink > 0.0 && shrink < 1.0)) throw ParameterError("shrink coefficient must lie in (0, 1)");
  if (!(f_tolerance >= 0.0) || !(x_tolerance >= 0.0)) throw ParameterError("tolerances must be non-negative");
  if (!(initial_simplex_scale > 0.0)) throw ParameterError("initial simplex scale must be positive");
}

namespace {

class Simplex {
 public:
  Simplex(const OptimizationProblem& problem, std::size_t max_evaluations)
      : problem_(problem), max_evaluations_(max_evaluations) {}

  // Wraps angle coordinates in place, then evaluates.
  double evaluate(std::vector<double>& x) {
    for (std::size_t i : problem_.angle_indices) x[i] = wrap_angle(x[i]);
    const double f = problem_.objective(std::span<const double>(x));
    ++evaluations_;
    if (!std::isfinite(f)) {
      std::string msg = "objective returned a non-finite value at (";
      for (std::size_t i = 0; i < x.size(); ++i) msg += (i ? ", " : "") + std::to_string(x[i]);
      throw ObjectiveDomainError(msg + ")", x);
    }
    return f;
  }

  bool budget_exhausted() const { return max_evaluations_ != 0 && evaluations_ >= max_evaluations_; }
  std::size_t evaluations() const { return evaluations_; }

 private:
  const OptimizationProblem& problem_;
  std::size_t max_evaluations_;
  std::size_t evaluations_ = 0;
};

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

OptResult nelder_mead(const OptimizationProblem& problem, std::span<const double> x0,
                      const NelderMeadOptions& options, const TraceCallback& trace) {
  options.validate();
  const std::size_t n = problem.dimension;
  if (n == 0) throw ParameterError("problem dimension must be positive");
  if (x0.size() != n) {
    throw ParameterError("x0 has " + std::to_string(x0.size()) + " entries, expected " + std::to_string(n));
  }
  if (!problem.objective) throw ParameterError("objective is not set");
  for (std::size_t i : problem.angle_indices) {
    if (i >= n) throw ParameterError("angle index out of range");
  }
  const std::size_t max_iterations = options.max_iterations == 0 ? 200 * n : options.max_iterations;

  Simplex eval(problem, options.max_evaluations);
  std::vector<std::vector<double>> vertices(n + 1, std::vector<double>(x0.begin(), x0.end()));
  std::vector<double> values(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    vertices[k + 1][k] += options.initial_simplex_scale * std::max(std::fabs(x0[k]), 1.0);
  }
  for (std::size_t k = 0; k <= n; ++k) values[k] = eval.evaluate(vertices[k]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), reflected(n), trial(n);

  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> v(n + 1);
    std::vector<double> f(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      v[k] = std::move(vertices[order[k]]);
      f[k] = values[order[k]];
    }
    vertices.swap(v);
    values.swap(f);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t k = 1; k <= n; ++k) d = std::max(d, distance(vertices[0], vertices[k]));
    return d;
  };
  auto point_along = [&](double coeff, std::vector<double>& out) {
    // centroid + coeff * (centroid - worst)
    for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + coeff * (centroid[i] - vertices[n][i]);
  };

  OptResult result;
  std::size_t iteration = 0;
  sort_vertices();
  for (;;) {
    const double spread = values[n] - values[0];
    const double diam = diameter();
    if (trace) trace({iteration, values[0], diam, eval.evaluations()});
    if (spread < options.f_tolerance) {
      result.termination = Termination::kFunctionTolerance;
      result.converged = true;
      break;
    }
    if (diam < options.x_tolerance) {
      result.termination = Termination::kSimplexTolerance;
      result.converged = true;
      break;
    }
    if (iteration >= max_iterations) {
      result.termination = Termination::kMaxIterations;
      break;
    }
    if (eval.budget_exhausted()) {
      result.termination = Termination::kMaxEvaluations;
      break;
    }
    ++iteration;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += vertices[k][i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    point_along(options.reflection, reflected);
    const double f_reflected = eval.evaluate(reflected);

    if (f_reflected < values[0]) {
      point_along(options.reflection * options.expansion, trial);
      const double f_expanded = eval.evaluate(trial);
      if (f_expanded < f_reflected) {
        vertices[n] = trial;
        values[n] = f_expanded;
      } else {
        vertices[n] = reflected;
        values[n] = f_reflected;
      }
    } else if (f_reflected < values[n - 1]) {
      vertices[n] = reflected;
      values[n] = f_reflected;
    } else {
      const bool outside = f_reflected < values[n];
      point_along(outside ? options.reflection * options.contraction : -options.contraction, trial);
      const double f_contracted = eval.evaluate(trial);
      if (f_contracted < (outside ? f_reflected : values[n])) {
        vertices[n] = trial;
        values[n] = f_contracted;
      } else {
        for (std::size_t k = 1; k <= n; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            vertices[k][i] = vertices[0][i] + options.shrink * (vertices[k][i] - vertices[0][i]);
          }
          values[k] = eval.evaluate(vertices[k]);
        }
      }
    }
    sort_vertices();
  }

  result.best_point = vertices[0];
  result.best_value = values[0];
  result.iterations = iteration;
  result.evaluation_count = eval.evaluations();
  return result;
}

}  // namespace isoswarm
