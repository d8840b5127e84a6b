// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hillband/truncated.hpp"

namespace hillband {
namespace oracle {

enum class BoundaryKind { dirichlet, periodic, antiperiodic };

/// Second-order finite-difference discretization of the equation on
/// [tau, tau + N*a] as a generalized tridiagonal pencil A y = lambda B y.
/// Entries are h-scaled: diag/offdiag carry the fluxes (p averaged
/// harmonically over each grid interval) plus h * q averaged over the dual
/// cell; mass_diag is h * s averaged over the dual cell. Dirichlet uses M
/// interior nodes with h = L/(M+1); periodic/antiperiodic use M nodes with
/// h = L/M and a signed wrap coupling stored in `corner`.
struct DiscreteOperator {
  int n_points = 0;  // M
  std::vector<double> diag;
  std::vector<double> offdiag;  // size M-1
  std::vector<double> mass_diag;
  double corner = 0;  // (0, M-1) coupling for periodic/antiperiodic
  BoundaryKind boundary = BoundaryKind::dirichlet;
  double tau = 0, length = 0, h = 0;
};

/// Grid size below which the discretization is too coarse to trust as an
/// oracle at the default tolerances.
inline int recommended_min_points(int n_cells) { return 64 * n_cells; }

/// Assembles the pencil. M must be a positive multiple of n_cells.
DiscreteOperator assemble(const PeriodicCoefficients& coeffs, double tau,
                          int n_cells, int M, BoundaryKind boundary);

/// Number of generalized eigenvalues strictly below lambda, by counting
/// negative pivots of the LDL^T factorization of A - lambda B (Sturm
/// sequence; the periodic wrap is handled by bordered elimination). Zero
/// pivots are replaced by -pivmin, the standard safeguard.
int inertia_below(const DiscreteOperator& op, double lambda);

/// All generalized eigenvalues below lambda_cap, each located by inertia
/// bisection to 1e-12 relative accuracy. The returned count always equals
/// inertia_below(op, lambda_cap) exactly. Indices are independent work
/// items (Exec::par runs them under OpenMP).
std::vector<double> eigenvalues_below(const DiscreteOperator& op, double lambda_cap,
                                      Exec exec = Exec::par);

/// Eigenvalues below lambda_cap with Richardson extrapolation over the
/// (M, 2M) pair, cancelling the leading O(h^2) error term.
std::vector<double> eigenvalues_below_richardson(const PeriodicCoefficients& coeffs,
                                                 double tau, int n_cells, int M,
                                                 BoundaryKind boundary,
                                                 double lambda_cap,
                                                 Exec exec = Exec::par);

/// The single discrete Dirichlet eigenvalue inside the open gap (errors out
/// if the count is not one). Richardson-extrapolated over (M, 2M) unless
/// richardson is false.
double gap_eigenvalue(const PeriodicCoefficients& coeffs, double tau, int n_cells,
                      int M, const GapInterval& gap, bool richardson = true,
                      Exec exec = Exec::par);

struct ComparisonRow {
  double oracle_value = 0;
  double predicted = 0;
  double rel_err = 0;
};

struct ComparisonReport {
  bool pass = false;
  double worst_rel_err = 0;
  int count_oracle = 0;
  int count_predicted = 0;
  std::vector<ComparisonRow> rows;
  std::vector<double> unmatched;  // tail of the longer list on count mismatch
};

/// Greedy one-to-one matching of the sorted oracle eigenvalues against the
/// sorted predicted spectrum. PASS iff the counts agree and the worst
/// relative error stays below rel_tol.
ComparisonReport compare(const std::vector<double>& oracle_vals,
                         const TruncatedSpectrum& predicted, double rel_tol);

}  // namespace oracle
}  // namespace hillband
