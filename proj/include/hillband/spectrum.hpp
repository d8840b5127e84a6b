// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hillband/transfer.hpp"

namespace hillband {

/// Interlaced periodic (nu_n, D = +2) and semi-periodic (mu_n, D = -2)
/// eigenvalues: nu_0 < mu_0 <= mu_1 < nu_1 <= nu_2 < mu_2 <= mu_3 < ...
/// These are the band edges. gap_degenerate[g] marks zero-width gaps
/// (double roots of D -+ 2), in which case the two edges of gap g are
/// stored as the same number.
struct BandEdges {
  std::vector<double> nu;
  std::vector<double> mu;
  std::vector<bool> gap_degenerate;  // one flag per finite gap found
  int n_gaps() const { return static_cast<int>(gap_degenerate.size()); }
};

enum class GapKind { semi_periodic, periodic };

/// Closed conditional instability interval. Even-indexed finite gaps are
/// the semi-periodic kind [mu_{2m}, mu_{2m+1}]; odd-indexed the periodic
/// kind [nu_{2m+1}, nu_{2m+2}].
struct GapInterval {
  int index = 0;
  GapKind kind = GapKind::semi_periodic;
  double lo = 0, hi = 0;
  bool degenerate = false;
  double width() const { return hi - lo; }
};

/// Open stability interval between consecutive gaps.
struct BandInterval {
  int index = 0;
  double lo = 0, hi = 0;
};

/// Alternating bands and gaps tiling (nu_0, upper edge of the last band].
struct SpectralPartition {
  std::vector<BandInterval> bands;
  std::vector<GapInterval> gaps;

  /// Gap containing lambda, or -1 when lambda lies in a band (or outside
  /// the covered range).
  int gap_containing(double lambda) const;
};

/// Locates all band edges up through gap n_gaps - 1. Edges are found by
/// walking D(lambda) upward from below nu_0, locating the single critical
/// point of D inside each gap and bisecting D -+ 2 = 0 on both sides of it;
/// a gap whose bisected width falls below 1e-8 * max(1, |lambda|) is
/// collapsed to the critical point and flagged degenerate. This cannot skip
/// zero-width gaps, which a plain sign-change scan would miss.
BandEdges find_band_edges(const PeriodicCoefficients& coeffs, int n_gaps);

SpectralPartition make_partition(const BandEdges& edges);

/// Interlacing chain of the edge ordering; false signals a solver bug.
bool check_interlacing(const BandEdges& edges);

/// Bloch dispersion alpha(lambda) = arccos(D/2)/a in (0, pi/a); requires
/// |D(lambda)| < 2. When a partition is supplied, the rejection message
/// names the gap the value fell into.
double dispersion_alpha(const PeriodicCoefficients& coeffs, double lambda,
                        const SpectralPartition* partition = nullptr);

/// Decay rate beta(lambda) = arccosh(|D|/2)/a >= 0; requires |D| >= 2
/// (band edges give 0).
double decay_beta(const PeriodicCoefficients& coeffs, double lambda);

enum class EdgeKind { periodic, semi_periodic };

/// A (semi-)periodic eigenfunction at a band edge, sampled over one period
/// with its zeros in [0, a).
struct EdgeEigenfunction {
  EdgeKind kind = EdgeKind::periodic;
  int index = 0;       // n in nu_n / mu_n
  double lambda = 0;
  SolutionSamples samples;     // on [0, a]
  std::vector<double> zeros;   // in [0, a)
};

/// Eigenfunctions at edge nu_index (periodic) or mu_index (semi-periodic),
/// built from the monodromy eigenvector for eigenvalue +1 / -1. Returns one
/// eigenfunction for a simple edge and two independent ones when the edge
/// belongs to a degenerate gap (two-dimensional eigenspace).
std::vector<EdgeEigenfunction> edge_eigenfunction(const PeriodicCoefficients& coeffs,
                                                  const BandEdges& edges,
                                                  EdgeKind kind, int index);

}  // namespace hillband
