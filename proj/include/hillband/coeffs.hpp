// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hillband {

/// Input-side failure (bad model, bad arguments). The CLI maps this to
/// exit code 1.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside a solver (lost bracket, stale eigenvalue,
/// step-size underflow). The CLI maps this to exit code 2.
struct ComputationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModelKind {
  free_particle,
  constant_shift,
  kronig_penney,
  mathieu,
  piecewise_constant,
};

const char* model_kind_name(ModelKind kind);

/// One constant-coefficient piece of a piecewise model.
struct Segment {
  double width = 0;
  double p = 1;
  double q = 0;
  double s = 1;
};

struct CoeffValues {
  double p, q, s;
};

/// The periodic coefficient triple (p, q, s) with period a for
///   (p y')' + (lambda s - q) y = 0.
/// p must be positive and s bounded away from zero; q is any bounded
/// periodic profile. Models other than Mathieu are piecewise constant and
/// carry a segment table that the propagator uses for closed-form steps.
/// Instances are immutable after construction and safe to share across
/// threads.
struct PeriodicCoefficients {
  ModelKind kind = ModelKind::free_particle;
  double period = 1.0;

  // model parameters (meaningful per kind)
  double v0 = 0.0;              // constant_shift
  double barrier_height = 0.0;  // kronig_penney
  double barrier_width = 0.0;   // kronig_penney
  double amplitude = 0.0;       // mathieu

  // segment table for piecewise-exact models; empty for smooth models
  std::vector<Segment> segments;
  // cumulative segment start offsets in [0, period); same length as segments
  std::vector<double> segment_starts;

  /// Witnessed lower bound for s(x); 1 for the built-in models.
  double s_min = 1.0;

  static PeriodicCoefficients free_particle(double period);
  static PeriodicCoefficients constant_shift(double period, double v0);
  static PeriodicCoefficients kronig_penney(double period, double barrier_height,
                                            double barrier_width);
  static PeriodicCoefficients mathieu(double period, double amplitude);
  static PeriodicCoefficients piecewise(double period, std::vector<Segment> segs);

  /// True when propagation can use exact constant-coefficient steps.
  bool piecewise_exact() const { return kind != ModelKind::mathieu; }

  /// Coefficient values at x reduced into [0, period). The reduction uses
  /// fmod, which is exact in IEEE arithmetic, so evaluation is exactly
  /// periodic.
  CoeffValues evaluate(double x) const;

  /// Positions in [0, period) where (p, q, s) jumps. Empty for smooth and
  /// constant models.
  std::vector<double> breakpoints() const;

  /// x reduced into [0, period).
  double reduce(double x) const;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

struct ValidationReport {
  bool ok = false;
  double s_min = 0;  // witnessed min of s
  double p_min = 0;  // witnessed min of p
  std::vector<ValidationIssue> issues;
};

/// Checks the coefficient hypotheses: positive period, p > 0 everywhere,
/// s > 0 everywhere (witnessing the bound), segments tiling the period.
/// Smooth models are sampled on a dense grid; piecewise models are checked
/// segment by segment, exactly.
ValidationReport validate(const PeriodicCoefficients& coeffs);

}  // namespace hillband
