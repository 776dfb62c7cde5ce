#pragma once

#include <functional>
#include <vector>

#include "pvi/types.hpp"

namespace pvi {

/// dz/dt = f(t, z) along the real axis.
using VectorField = std::function<Vector(double, const Vector&)>;

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// First trial step; 0 picks one from the field.
  double initial_step = 0.0;
  /// Smallest allowed |h| relative to max(1, |t|).
  double min_relative_step = 1e-13;
  long max_steps = 2'000'000;
  /// Points the path must not touch (the fixed singularities of the field).
  std::vector<double> singular_points;
  /// Nonzero disables step control and takes steps of exactly this size
  /// (last step shortened); used for order studies.
  double fixed_step = 0.0;
};

struct IntegratorStats {
  long steps = 0;
  long rejected = 0;
  long evaluations = 0;
  /// Largest accepted scaled error estimate (<= 1 under step control).
  double max_error_ratio = 0.0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vector> states;
  IntegratorStats stats;
};

/// Raised when the step size collapses, typically at a movable pole.
class StepSizeUnderflow : public ConvergenceError {
 public:
  StepSizeUnderflow(double where, double step);
  double location() const { return location_; }
  double step() const { return step_; }

 private:
  double location_;
  double step_;
};

/// Dormand-Prince 5(4) with adaptive steps and the 4th-order continuous
/// extension. States are reported at each sample time (which must lie in the
/// closed interval between t0 and t1, in the direction of integration).
/// Without samples, the trajectory holds t0 and t1.
Trajectory integrate(const VectorField& f, double t0, const Vector& z0, double t1,
                     const std::vector<double>& samples = {}, const IntegratorOptions& options = {});

/// n equally spaced points from a to b inclusive.
std::vector<double> linspace(double a, double b, int n);

}  // namespace pvi
