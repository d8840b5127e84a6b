// SPDX-License-Identifier: Apache-2.0
#include "hillband/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hillband {
namespace oracle {

namespace {

// 5-point Gauss-Legendre rule on [-1, 1].
constexpr double kGx[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                           -0.9061798459386640, 0.9061798459386640};
constexpr double kGw[5] = {0.5688888888888889, 0.4786286704993665,
                           0.4786286704993665, 0.2369268850561891,
                           0.2369268850561891};

enum class Field { p_inverse, q, s };

double field_value(const PeriodicCoefficients& coeffs, Field f, double x) {
  const CoeffValues v = coeffs.evaluate(x);
  switch (f) {
    case Field::p_inverse: return 1.0 / v.p;
    case Field::q: return v.q;
    case Field::s: return v.s;
  }
  return 0;
}

// Integral of the chosen field over [l, r], split at coefficient jumps so
// the quadrature never straddles a discontinuity. Exact for the piecewise
// models; far beyond discretization accuracy for smooth ones.
double integrate_field(const PeriodicCoefficients& coeffs, Field f, double l,
                       double r) {
  std::vector<double> pts{l};
  const std::vector<double> bps = coeffs.breakpoints();
  if (!bps.empty()) {
    const double a = coeffs.period;
    const auto k0 = static_cast<long long>(std::floor(l / a)) - 1;
    const auto k1 = static_cast<long long>(std::ceil(r / a)) + 1;
    for (long long k = k0; k <= k1; ++k)
      for (double b : bps) {
        const double pos = static_cast<double>(k) * a + b;
        if (pos > l && pos < r) pts.push_back(pos);
      }
    std::sort(pts.begin() + 1, pts.end());
  }
  pts.push_back(r);
  double total = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    const double half = 0.5 * (pts[i + 1] - pts[i]);
    if (half <= 0) continue;
    double acc = 0;
    for (int g = 0; g < 5; ++g)
      acc += kGw[g] * field_value(coeffs, f, mid + half * kGx[g]);
    total += acc * half;
  }
  return total;
}

double average_field(const PeriodicCoefficients& coeffs, Field f, double l,
                     double r) {
  return integrate_field(coeffs, f, l, r) / (r - l);
}

// Harmonic mean of p over a grid interval: the two-point flux coefficient
// that keeps second-order accuracy across p jumps.
double flux_p(const PeriodicCoefficients& coeffs, double l, double r) {
  return 1.0 / average_field(coeffs, Field::p_inverse, l, r);
}

double pivot_guard(double d, double pivmin) {
  return (std::abs(d) < pivmin) ? -pivmin : d;
}

}  // namespace

DiscreteOperator assemble(const PeriodicCoefficients& coeffs, double tau,
                          int n_cells, int M, BoundaryKind boundary) {
  if (n_cells < 1) throw ValidationError("assemble: n_cells must be >= 1");
  if (M < 3 || M % n_cells != 0)
    throw ValidationError(
        "assemble: grid size must be a positive multiple of n_cells (and >= 3)");

  DiscreteOperator op;
  op.n_points = M;
  op.boundary = boundary;
  op.tau = tau;
  op.length = coeffs.period * n_cells;

  if (boundary == BoundaryKind::dirichlet) {
    const double h = op.length / (M + 1);
    op.h = h;
    // interval fluxes between nodes i and i+1, i = 0..M (node 0 and M+1 are
    // the clamped boundary nodes)
    std::vector<double> pf(M + 1);
    for (int i = 0; i <= M; ++i)
      pf[i] = flux_p(coeffs, tau + i * h, tau + (i + 1) * h);
    op.diag.resize(M);
    op.offdiag.resize(M - 1);
    op.mass_diag.resize(M);
    for (int i = 1; i <= M; ++i) {
      const double x = tau + i * h;
      op.diag[i - 1] = (pf[i - 1] + pf[i]) / h +
                       h * average_field(coeffs, Field::q, x - 0.5 * h, x + 0.5 * h);
      op.mass_diag[i - 1] =
          h * average_field(coeffs, Field::s, x - 0.5 * h, x + 0.5 * h);
      if (i < M) op.offdiag[i - 1] = -pf[i] / h;
    }
  } else {
    const double h = op.length / M;
    op.h = h;
    const double sigma = (boundary == BoundaryKind::periodic) ? 1.0 : -1.0;
    std::vector<double> pf(M);
    for (int i = 0; i < M; ++i)
      pf[i] = flux_p(coeffs, tau + i * h, tau + (i + 1) * h);
    op.diag.resize(M);
    op.offdiag.resize(M - 1);
    op.mass_diag.resize(M);
    for (int i = 0; i < M; ++i) {
      const double x = tau + i * h;
      const double p_left = pf[(i + M - 1) % M];
      op.diag[i] = (p_left + pf[i]) / h +
                   h * average_field(coeffs, Field::q, x - 0.5 * h, x + 0.5 * h);
      op.mass_diag[i] =
          h * average_field(coeffs, Field::s, x - 0.5 * h, x + 0.5 * h);
      if (i < M - 1) op.offdiag[i] = -pf[i] / h;
    }
    op.corner = -sigma * pf[M - 1] / h;
  }
  return op;
}

int inertia_below(const DiscreteOperator& op, double lambda) {
  const int m = op.n_points;
  double emax = 0;
  for (double e : op.offdiag) emax = std::max(emax, std::abs(e));
  emax = std::max(emax, std::abs(op.corner));
  const double pivmin =
      std::numeric_limits<double>::min() * std::max(1.0, emax * emax);

  int neg = 0;
  if (op.boundary == BoundaryKind::dirichlet) {
    double d = op.diag[0] - lambda * op.mass_diag[0];
    d = pivot_guard(d, pivmin);
    if (d < 0) ++neg;
    for (int i = 1; i < m; ++i) {
      const double e = op.offdiag[i - 1];
      d = (op.diag[i] - lambda * op.mass_diag[i]) - e * e / d;
      d = pivot_guard(d, pivmin);
      if (d < 0) ++neg;
    }
    return neg;
  }

  // cyclic pencil: bordered elimination, last row/column kept dense
  std::vector<double> t(m);
  for (int i = 0; i < m; ++i) t[i] = op.diag[i] - lambda * op.mass_diag[i];
  double last = t[m - 1];
  double w = op.corner;  // border entry (i, m-1), starts at (0, m-1)
  for (int i = 0; i <= m - 2; ++i) {
    const double d = pivot_guard(t[i], pivmin);
    if (d < 0) ++neg;
    double w_next = 0;
    if (i <= m - 3) {
      const double b = op.offdiag[i];
      t[i + 1] -= b * b / d;
      w_next = ((i + 1 == m - 2) ? op.offdiag[m - 2] : 0.0) - b * w / d;
    }
    last -= w * w / d;
    w = w_next;
  }
  if (pivot_guard(last, pivmin) < 0) ++neg;
  return neg;
}

std::vector<double> eigenvalues_below(const DiscreteOperator& op, double lambda_cap,
                                      Exec exec) {
  const int count = inertia_below(op, lambda_cap);
  std::vector<double> out(count);
  if (count == 0) return out;

  // generalized Gershgorin lower bound for the pencil
  double lo = std::numeric_limits<double>::infinity();
  const int m = op.n_points;
  for (int i = 0; i < m; ++i) {
    double row = 0;
    if (i > 0) row += std::abs(op.offdiag[i - 1]);
    if (i < m - 1) row += std::abs(op.offdiag[i]);
    if (i == 0 || i == m - 1) row += std::abs(op.corner);
    lo = std::min(lo, (op.diag[i] - row) / op.mass_diag[i]);
  }
  lo -= 1e-3 * (1.0 + std::abs(lo));

  parallel_for(exec, static_cast<std::size_t>(count), [&](std::size_t k) {
    const int target = static_cast<int>(k) + 1;
    double a = lo, b = lambda_cap;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (b - a <= 1e-12 * std::max(1.0, std::abs(mid))) break;
      if (inertia_below(op, mid) >= target) {
        b = mid;
      } else {
        a = mid;
      }
    }
    out[k] = 0.5 * (a + b);
  });
  return out;
}

namespace {

double richardson_pair(double coarse, double fine, double h1, double h2) {
  return (fine * h1 * h1 - coarse * h2 * h2) / (h1 * h1 - h2 * h2);
}

}  // namespace

std::vector<double> eigenvalues_below_richardson(const PeriodicCoefficients& coeffs,
                                                 double tau, int n_cells, int M,
                                                 BoundaryKind boundary,
                                                 double lambda_cap, Exec exec) {
  const DiscreteOperator op1 = assemble(coeffs, tau, n_cells, M, boundary);
  const DiscreteOperator op2 = assemble(coeffs, tau, n_cells, 2 * M, boundary);
  const std::vector<double> e1 = eigenvalues_below(op1, lambda_cap, exec);
  const std::vector<double> e2 = eigenvalues_below(op2, lambda_cap, exec);
  const std::size_t n = std::min(e1.size(), e2.size());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = richardson_pair(e1[i], e2[i], op1.h, op2.h);
  return out;
}

double gap_eigenvalue(const PeriodicCoefficients& coeffs, double tau, int n_cells,
                      int M, const GapInterval& gap, bool richardson, Exec exec) {
  double vals[2];
  const int ms[2] = {M, 2 * M};
  double hs[2];
  const int passes = richardson ? 2 : 1;
  for (int r = 0; r < passes; ++r) {
    const DiscreteOperator op =
        assemble(coeffs, tau, n_cells, ms[r], BoundaryKind::dirichlet);
    hs[r] = op.h;
    const int below = inertia_below(op, gap.lo);
    const int upto = inertia_below(op, gap.hi);
    if (upto - below != 1) {
      std::ostringstream msg;
      msg << "gap_eigenvalue: found " << (upto - below)
          << " discrete eigenvalues in gap " << gap.index << " [" << gap.lo
          << ", " << gap.hi << "] at M=" << ms[r] << "; expected exactly one";
      throw ComputationError(msg.str());
    }
    const int target = below + 1;
    double a = gap.lo, b = gap.hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (b - a <= 1e-12 * std::max(1.0, std::abs(mid))) break;
      if (inertia_below(op, mid) >= target) {
        b = mid;
      } else {
        a = mid;
      }
    }
    vals[r] = 0.5 * (a + b);
  }
  (void)exec;
  if (!richardson) return vals[0];
  return richardson_pair(vals[0], vals[1], hs[0], hs[1]);
}

ComparisonReport compare(const std::vector<double>& oracle_vals,
                         const TruncatedSpectrum& predicted, double rel_tol) {
  ComparisonReport rep;
  std::vector<double> ov = oracle_vals;
  std::sort(ov.begin(), ov.end());
  const std::vector<double> pv = predicted.all_lambdas_sorted();
  rep.count_oracle = static_cast<int>(ov.size());
  rep.count_predicted = static_cast<int>(pv.size());

  const std::size_t n = std::min(ov.size(), pv.size());
  for (std::size_t i = 0; i < n; ++i) {
    ComparisonRow row;
    row.oracle_value = ov[i];
    row.predicted = pv[i];
    row.rel_err = std::abs(ov[i] - pv[i]) / std::max(1.0, std::abs(pv[i]));
    rep.worst_rel_err = std::max(rep.worst_rel_err, row.rel_err);
    rep.rows.push_back(row);
  }
  const auto& longer = (ov.size() > pv.size()) ? ov : pv;
  for (std::size_t i = n; i < longer.size(); ++i) rep.unmatched.push_back(longer[i]);

  rep.pass = (rep.count_oracle == rep.count_predicted) &&
             (rep.worst_rel_err < rel_tol);
  return rep;
}

}  // namespace oracle
}  // namespace hillband
