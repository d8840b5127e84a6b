// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hillband/spectrum.hpp"

namespace hillband {

/// Dirichlet restriction of the equation to [tau, tau + N*a]: y vanishes at
/// both ends. tau may be any real number; the length is always a whole
/// number of periods.
struct TruncationConfig {
  double tau = 0;
  int n_cells = 1;
  double length(double period) const { return n_cells * period; }
};

/// Eigenstate inside stability interval band_index with dispersion
/// alpha(lambda) = j*pi/L. Depends on N but not on tau.
struct BandState {
  int band_index = 0;
  int j = 0;
  double lambda = 0;
};

enum class GapStateSubtype {
  surface_left,             // |rho| < 1: concentrated at the tau end
  surface_right,            // |rho| > 1: concentrated at the tau + L end
  band_edge_periodic,       // rho = +1: periodic band-edge function
  band_edge_semi_periodic,  // rho = -1: semi-periodic band-edge function
  degenerate_gap,           // zero-width gap: always a band-edge function
};

const char* subtype_name(GapStateSubtype t);

/// The single eigenstate of the truncated problem inside a finite gap:
/// the solution vanishing at tau also vanishes at tau + a, so it vanishes
/// at every cell boundary and its eigenvalue does not depend on N. rho is
/// the Floquet multiplier of that solution over one period; log|rho| =
/// +-beta(lambda)*a and its sign tells which end the state clings to.
struct GapState {
  int gap_index = 0;
  GapKind kind = GapKind::semi_periodic;
  double lambda = 0;
  double rho = 1;
  GapStateSubtype subtype = GapStateSubtype::degenerate_gap;
};

/// Full classification of the truncated spectrum over the covered range:
/// N - 1 band states per band, one gap state per finite gap.
struct TruncatedSpectrum {
  TruncationConfig config;
  std::vector<BandState> band_states;
  std::vector<GapState> gap_states;

  struct Entry {
    double lambda;
    bool is_gap_state;
    int list_index;  // index into band_states or gap_states
  };
  /// Deterministic merged view ordered by (lambda, type, index).
  std::vector<Entry> merged() const;
  std::vector<double> all_lambdas_sorted() const;
};

/// One refined contact of the sweep curve with a gap edge.
struct EdgeTouch {
  double tau;     // where Lambda(tau) reaches the edge
  double lambda;  // gap-state eigenvalue recomputed at that tau
};

/// Lambda(tau) for one gap over a period of tau, with the oscillation
/// count and the refined edge touches. Touch points are located as roots
/// in tau of the (1,2) entry of the one-period propagator at the edge
/// eigenvalue, which is the vanishing condition defining the touch.
struct TauSweep {
  int gap_index = 0;
  std::vector<double> tau_grid;
  std::vector<double> lambdas;
  std::vector<GapStateSubtype> subtypes;
  int extrema_count = 0;  // completed up-down pairs per period
  std::vector<EdgeTouch> lower_touches;
  std::vector<EdgeTouch> upper_touches;
};

/// Truncated eigenfunction on [tau, tau + L], normalized to unit s-weighted
/// norm, with the boundary residual and the s-weighted mass in the first
/// and last cell (the localization diagnostic for gap states).
struct TruncatedEigenfunction {
  SolutionSamples samples;
  double endpoint_residual = 0;  // |y(tau+L)| / max |y|
  double first_cell_mass = 0;
  double last_cell_mass = 0;
};

/// The N - 1 eigenvalues in the given band: roots of
/// D(lambda) = 2 cos(j pi / N), j = 1 .. N-1, by bisection on the strictly
/// monotone band restriction of D. Returns an empty list for N = 1.
std::vector<BandState> band_states(const PeriodicCoefficients& coeffs,
                                   const SpectralPartition& partition,
                                   int band_index, int n_cells,
                                   Exec exec = Exec::par);

/// The unique eigenvalue in a finite gap for boundary tau: the root of
/// g(lambda) = y(tau + a; lambda) where y solves the shooting problem
/// y(tau) = 0, (p y')(tau) = 1. Also reports the Floquet multiplier rho of
/// that solution and the localization subtype.
GapState gap_state(const PeriodicCoefficients& coeffs, const GapInterval& gap,
                   double tau);

/// Assembles band states for bands 0 .. n_bands-1 and gap states for the
/// intervening finite gaps.
TruncatedSpectrum classify_spectrum(const PeriodicCoefficients& coeffs,
                                    const SpectralPartition& partition,
                                    const TruncationConfig& config, int n_bands,
                                    Exec exec = Exec::par);

/// Lambda(tau) on n_points uniform tau values spanning [tau0, tau0 + a],
/// plus oscillation count and refined edge touches.
TauSweep tau_sweep(const PeriodicCoefficients& coeffs, const GapInterval& gap,
                   double tau0, int n_points, Exec exec = Exec::par);

/// Reconstructs the eigenfunction for a computed eigenvalue by integrating
/// the shooting problem across all N cells (grid_per_cell samples per
/// cell). Fails if the endpoint residual exceeds 1e-6 of the peak
/// amplitude, which signals a stale eigenvalue.
TruncatedEigenfunction eigenfunction(const PeriodicCoefficients& coeffs,
                                     double lambda,
                                     const TruncationConfig& config,
                                     int grid_per_cell = 256);

}  // namespace hillband
