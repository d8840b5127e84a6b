// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "hillband/coeffs.hpp"
#include "hillband/parallel.hpp"

namespace hillband {

/// 2x2 propagator acting on the state (y, p*y'). In this chart the state
/// stays continuous across p breakpoints and the matrix is unimodular
/// (the p-weighted Wronskian is constant). The trace of the one-period
/// propagator equals the classical discriminant phi1(a) + phi2'(a) because
/// p has period a.
struct TransferMatrix {
  double m11 = 1, m12 = 0, m21 = 0, m22 = 1;

  double trace() const { return m11 + m22; }
  double det() const { return m11 * m22 - m12 * m21; }

  /// Maps the state (y, py) at the source point to the target point.
  void apply(double& y, double& py) const {
    const double y1 = m11 * y + m12 * py;
    const double py1 = m21 * y + m22 * py;
    y = y1;
    py = py1;
  }
};

/// right-to-left composition: (b * a) acts as "a first, then b"
inline TransferMatrix operator*(const TransferMatrix& b, const TransferMatrix& a) {
  TransferMatrix r;
  r.m11 = b.m11 * a.m11 + b.m12 * a.m21;
  r.m12 = b.m11 * a.m12 + b.m12 * a.m22;
  r.m21 = b.m21 * a.m11 + b.m22 * a.m21;
  r.m22 = b.m21 * a.m12 + b.m22 * a.m22;
  return r;
}

/// Sampled solution of the equation at a fixed lambda: values of y and
/// p*y' on an ordered grid.
struct SolutionSamples {
  double lambda = 0;
  std::vector<double> grid;
  std::vector<double> y;
  std::vector<double> py;
};

/// Propagator of (p y')' + (lambda s - q) y = 0 from x0 to x1 (x0 <= x1).
/// Piecewise-constant models use exact constant-coefficient steps split at
/// coefficient breakpoints; smooth models use an adaptive high-order
/// Runge-Kutta integrator (relative tolerance 1e-14, absolute 1e-16).
TransferMatrix propagate(const PeriodicCoefficients& coeffs, double lambda,
                         double x0, double x1);

/// Propagator over one period starting at tau. Its trace is independent of
/// tau; its eigenvalues are the Floquet multipliers rho, 1/rho.
TransferMatrix monodromy(const PeriodicCoefficients& coeffs, double lambda,
                         double tau);

/// Discriminant D(lambda): trace of the monodromy at base point 0.
/// |D| < 2 on stability intervals, |D| >= 2 on conditional instability
/// intervals.
double discriminant(const PeriodicCoefficients& coeffs, double lambda);

/// D(lambda) over a batch of lambda values. Work items are independent;
/// Exec::par runs them under OpenMP with identical results.
std::vector<double> discriminant_scan(const PeriodicCoefficients& coeffs,
                                      std::span<const double> lambdas,
                                      Exec exec = Exec::par);

/// Integrates the initial value problem y(tau) = y0, (p y')(tau) = py0 and
/// samples (y, p*y') on the given grid. The grid must start at tau and be
/// strictly increasing.
SolutionSamples solve_ivp(const PeriodicCoefficients& coeffs, double lambda,
                          double tau, double y0, double py0,
                          std::span<const double> grid);

}  // namespace hillband
