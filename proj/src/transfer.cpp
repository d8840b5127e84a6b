// SPDX-License-Identifier: Apache-2.0
#include "hillband/transfer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

namespace hillband {

namespace {

// Branch-unified phase functions for one constant-coefficient step of
// width w with kappa^2 = (lambda*s - q)/p and z = kappa^2 * w^2:
//   c(z)  = cos(sqrt z)          (z >= 0)   cosh(sqrt -z)          (z < 0)
//   sn(z) = sin(sqrt z)/sqrt z   (z >= 0)   sinh(sqrt -z)/sqrt -z  (z < 0)
// Near z = 0 both branches meet; series forms avoid the 0/0.
void phase_functions(double z, double& c, double& sn) {
  if (std::abs(z) < 1e-8) {
    c = 1.0 + z * (-0.5 + z * (1.0 / 24.0 - z / 720.0));
    sn = 1.0 + z * (-1.0 / 6.0 + z * (1.0 / 120.0 - z / 5040.0));
  } else if (z > 0) {
    const double r = std::sqrt(z);
    c = std::cos(r);
    sn = std::sin(r) / r;
  } else {
    const double r = std::sqrt(-z);
    c = std::cosh(r);
    sn = std::sinh(r) / r;
  }
}

// Exact propagator across a constant-coefficient piece of width w.
TransferMatrix constant_step(double p, double q, double s, double lambda, double w) {
  const double g = lambda * s - q;
  const double z = (g / p) * w * w;
  double c, sn;
  phase_functions(z, c, sn);
  TransferMatrix t;
  t.m11 = c;
  t.m12 = (w / p) * sn;
  t.m21 = -g * w * sn;
  t.m22 = c;
  return t;
}

// Coefficient discontinuities strictly inside (x0, x1), in increasing order.
std::vector<double> cuts_between(const PeriodicCoefficients& coeffs, double x0,
                                 double x1) {
  std::vector<double> cuts;
  const std::vector<double> bps = coeffs.breakpoints();
  if (bps.empty()) return cuts;
  const double a = coeffs.period;
  const auto k0 = static_cast<long long>(std::floor(x0 / a)) - 1;
  const auto k1 = static_cast<long long>(std::ceil(x1 / a)) + 1;
  for (long long k = k0; k <= k1; ++k) {
    for (double b : bps) {
      const double pos = static_cast<double>(k) * a + b;
      if (pos > x0 && pos < x1) cuts.push_back(pos);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

TransferMatrix propagate_piecewise(const PeriodicCoefficients& coeffs, double lambda,
                                   double x0, double x1) {
  std::vector<double> pts = cuts_between(coeffs, x0, x1);
  pts.insert(pts.begin(), x0);
  pts.push_back(x1);
  TransferMatrix t;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double w = pts[i + 1] - pts[i];
    if (w <= 0) continue;
    const CoeffValues v = coeffs.evaluate(0.5 * (pts[i] + pts[i + 1]));
    t = constant_step(v.p, v.q, v.s, lambda, w) * t;
  }
  return t;
}

using State4 = std::array<double, 4>;  // columns (y1, py1, y2, py2)

struct MatrixRhs {
  const PeriodicCoefficients* coeffs;
  double lambda;
  void operator()(const State4& u, State4& du, double x) const {
    const CoeffValues v = coeffs->evaluate(x);
    const double k = v.q - lambda * v.s;
    du[0] = u[1] / v.p;
    du[1] = k * u[0];
    du[2] = u[3] / v.p;
    du[3] = k * u[2];
  }
};

TransferMatrix propagate_smooth(const PeriodicCoefficients& coeffs, double lambda,
                                double x0, double x1) {
  namespace odeint = boost::numeric::odeint;
  State4 u = {1, 0, 0, 1};
  const double span = x1 - x0;
  const double h0 = std::min(span, 0.05 / std::sqrt(1.0 + std::abs(lambda)));
  try {
    // Tolerance is chosen so the discriminant comes out with ~1e-12 global
    // error: narrow high-index gaps produce |D| - 2 humps as small as 1e-10
    // and must not be washed out by integrator bias.
    auto stepper = odeint::make_controlled(
        1e-16, 1e-14, odeint::runge_kutta_fehlberg78<State4>());
    odeint::integrate_adaptive(stepper, MatrixRhs{&coeffs, lambda}, u, x0, x1, h0);
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "adaptive propagation failed on [" << x0 << ", " << x1
        << "] at lambda=" << lambda << ": " << e.what();
    throw ComputationError(msg.str());
  }
  TransferMatrix t;
  t.m11 = u[0];
  t.m21 = u[1];
  t.m12 = u[2];
  t.m22 = u[3];
  return t;
}

}  // namespace

TransferMatrix propagate(const PeriodicCoefficients& coeffs, double lambda,
                         double x0, double x1) {
  if (!(x0 <= x1)) throw ValidationError("propagate: requires x0 <= x1");
  if (x0 == x1) return TransferMatrix{};
  if (coeffs.piecewise_exact()) return propagate_piecewise(coeffs, lambda, x0, x1);
  return propagate_smooth(coeffs, lambda, x0, x1);
}

TransferMatrix monodromy(const PeriodicCoefficients& coeffs, double lambda,
                         double tau) {
  return propagate(coeffs, lambda, tau, tau + coeffs.period);
}

double discriminant(const PeriodicCoefficients& coeffs, double lambda) {
  return monodromy(coeffs, lambda, 0.0).trace();
}

std::vector<double> discriminant_scan(const PeriodicCoefficients& coeffs,
                                      std::span<const double> lambdas, Exec exec) {
  std::vector<double> out(lambdas.size());
  parallel_for(exec, lambdas.size(),
               [&](std::size_t i) { out[i] = discriminant(coeffs, lambdas[i]); });
  return out;
}

SolutionSamples solve_ivp(const PeriodicCoefficients& coeffs, double lambda,
                          double tau, double y0, double py0,
                          std::span<const double> grid) {
  if (grid.empty() || grid.front() != tau)
    throw ValidationError("solve_ivp: grid must start at tau");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw ValidationError("solve_ivp: grid must be strictly increasing");

  SolutionSamples out;
  out.lambda = lambda;
  out.grid.assign(grid.begin(), grid.end());
  out.y.resize(grid.size());
  out.py.resize(grid.size());
  double y = y0, py = py0;
  out.y[0] = y;
  out.py[0] = py;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    propagate(coeffs, lambda, grid[i], grid[i + 1]).apply(y, py);
    out.y[i + 1] = y;
    out.py[i + 1] = py;
  }
  return out;
}

}  // namespace hillband
