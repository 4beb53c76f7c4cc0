// Nelder-Mead downhill simplex with optional angle coordinates.
//
// Coordinates listed in `angle_indices` are wrapped into [0, 2*pi) every
// time a candidate vertex is generated, so the objective never sees an angle
// outside that interval.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace isoswarm {

using Objective = std::function<double(std::span<const double>)>;

struct OptimizationProblem {
  std::size_t dimension = 0;
  Objective objective;
  std::vector<std::size_t> angle_indices;
};

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double f_tolerance = 1e-8;  // stop when max - min over the simplex < f_tolerance
  double x_tolerance = 1e-8;  // stop when max distance from the best vertex < x_tolerance
  std::size_t max_iterations = 0;   // 0 selects 200 * dimension
  std::size_t max_evaluations = 0;  // 0 means unlimited
  // Vertex k differs from x0 in coordinate k by scale * max(|x0_k|, 1).
  double initial_simplex_scale = 0.05;

  void validate() const;
};

enum class Termination {
  kFunctionTolerance,
  kSimplexTolerance,
  kMaxIterations,
  kMaxEvaluations,
};

struct OptResult {
  std::vector<double> best_point;
  double best_value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluation_count = 0;
  bool converged = false;
  Termination termination = Termination::kMaxIterations;
};

struct IterationTrace {
  std::size_t iteration = 0;
  double best_value = 0.0;
  double simplex_diameter = 0.0;
  std::size_t evaluation_count = 0;
};

using TraceCallback = std::function<void(const IterationTrace&)>;

// Throws ObjectiveDomainError (carrying the point) if the objective returns
// a non-finite value, ParameterError for bad options or a size mismatch.
OptResult nelder_mead(const OptimizationProblem& problem, std::span<const double> x0,
                      const NelderMeadOptions& options = {}, const TraceCallback& trace = {});

}  // namespace isoswarm
