// SPDX-License-Identifier: Apache-2.0
#include "hillband/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hillband {

namespace {

constexpr double kPi = std::numbers::pi;

// Bisection on a sign change; converges to 1e-10 * max(1, |x|).
template <class F>
double bisect_root(F&& f, double lo, double hi, double flo, double fhi) {
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw ComputationError("bisect_root: endpoints do not bracket a sign change");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-10 * std::max(1.0, std::abs(mid))) return mid;
    const double fm = f(mid);
    if (fm == 0) return mid;
    if ((flo < 0) != (fm < 0)) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

template <class F>
double golden_max(F&& f, double lo, double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-11 * std::max(1.0, std::abs(lo) + std::abs(hi))) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

// One parabolic refinement of an extremum estimate; sharpens the location
// well past the noise-limited golden-section result because the fit spans
// h where curvature dominates roundoff.
template <class F>
double parabola_polish(F&& f, double c, double h, bool maximize) {
  const double fm = f(c - h);
  const double f0 = f(c);
  const double fp = f(c + h);
  const double denom = fm - 2 * f0 + fp;
  if ((maximize && denom >= 0) || (!maximize && denom <= 0)) return c;
  const double shift = 0.5 * h * (fm - fp) / denom;
  if (std::abs(shift) > h) return c;
  return c + shift;
}

double lower_spectral_bound(const PeriodicCoefficients& coeffs) {
  double qs_min = std::numeric_limits<double>::infinity();
  if (coeffs.piecewise_exact()) {
    for (const Segment& seg : coeffs.segments)
      qs_min = std::min(qs_min, seg.q / seg.s);
  } else {
    const int n = 2048;
    for (int i = 0; i <= n; ++i) {
      const CoeffValues v = coeffs.evaluate(coeffs.period * i / n);
      qs_min = std::min(qs_min, v.q / v.s);
    }
  }
  return qs_min - 1.0;
}

}  // namespace

BandEdges find_band_edges(const PeriodicCoefficients& coeffs, int n_gaps) {
  if (n_gaps < 1) throw ValidationError("find_band_edges: n_gaps must be >= 1");
  const double a = coeffs.period;
  const double step0 = std::min(0.25, (kPi / a) * (kPi / a) / 8.0);
  const double cap_step = std::max(2 * step0, 1.0 / (a * a));
  const double lambda_low = lower_spectral_bound(coeffs);
  const double lambda_cap =
      lambda_low + std::pow((n_gaps + 3) * kPi / a, 2) + 100.0;

  auto D = [&](double l) { return discriminant(coeffs, l); };

  BandEdges edges;
  auto exhausted = [&](double x) {
    if (x <= lambda_cap) return;
    std::ostringstream msg;
    msg << "band-edge scan exhausted at lambda=" << x << " after "
        << edges.n_gaps() << " of " << n_gaps << " gaps (cap " << lambda_cap
        << ")";
    throw ComputationError(msg.str());
  };

  // nu_0: first crossing of D = 2 coming up from below the spectrum.
  double x_prev = lambda_low;
  double f_prev = D(x_prev);
  {
    double back = std::max(1.0, step0);
    int guard = 0;
    while (f_prev <= 2) {
      x_prev -= back;
      back *= 2;
      f_prev = D(x_prev);
      if (++guard > 60)
        throw ComputationError("find_band_edges: no region with D > 2 below the spectrum");
    }
  }
  double step = step0;
  double x = x_prev + step;
  double fx = D(x);
  while (fx > 2) {
    x_prev = x;
    f_prev = fx;
    step = std::min(step * 1.3, cap_step);
    x = x_prev + step;
    fx = D(x);
    exhausted(x);
  }
  const double nu0 = bisect_root(
      [&](double l) { return D(l) - 2; }, x_prev, x, f_prev - 2, fx - 2);
  edges.nu.push_back(nu0);

  double prev_edge = nu0;
  for (int g = 0; g < n_gaps; ++g) {
    const double sgn = (g % 2 == 0) ? -1.0 : 1.0;
    auto f = [&](double l) { return sgn * D(l); };

    // March up from the previous edge. f rises from -2 through the band and
    // keeps rising inside gap g until the single critical point of D there.
    std::vector<std::pair<double, double>> hist;  // (x, f) march samples
    double x0 = prev_edge;
    double f0 = f(x0);
    hist.emplace_back(x0, f0);
    step = step0;
    double x1 = x0 + step;
    double f1 = f(x1);
    {
      int guard = 0;
      while (f1 <= f0) {  // overshoot straight past the hump: shrink
        step *= 0.25;
        x1 = x0 + step;
        f1 = f(x1);
        if (++guard > 80)
          throw ComputationError("find_band_edges: cannot resolve rise after edge");
      }
    }
    hist.emplace_back(x1, f1);
    double x2, f2;
    for (;;) {
      x2 = x1 + step;
      f2 = f(x2);
      exhausted(x2);
      if (f2 <= f1) break;
      x0 = x1;
      f0 = f1;
      x1 = x2;
      f1 = f2;
      hist.emplace_back(x1, f1);
      step = std::min(step * 1.3, cap_step);
    }

    double c = golden_max(f, x0, x2);
    c = parabola_polish(f, c, 1e-4 * std::max(1.0, std::abs(c)), true);
    const double fc = f(c);

    // left anchor: last march sample strictly below c with f < 2 (the
    // previous edge qualifies, so one always exists)
    double anchor_x = prev_edge, anchor_f = hist.front().second;
    for (const auto& [hx, hf] : hist) {
      if (hx < c && hf < 2) {
        anchor_x = hx;
        anchor_f = hf;
      }
    }

    const double deg_tol = 1e-8 * std::max(1.0, std::abs(c));
    double e_lo, e_hi;
    bool degenerate;
    if (fc <= 2) {
      // critical value at the tangency: zero-width gap
      e_lo = e_hi = c;
      degenerate = true;
    } else {
      e_lo = bisect_root([&](double l) { return f(l) - 2; }, anchor_x, c,
                         anchor_f - 2, fc - 2);
      // right edge: march past the gap until f < 2 again
      double r0 = c, fr0 = fc;
      double rstep = step0;
      double r1 = r0 + rstep;
      double fr1 = f(r1);
      while (fr1 >= 2) {
        r0 = r1;
        fr0 = fr1;
        rstep = std::min(rstep * 1.3, cap_step);
        r1 = r0 + rstep;
        fr1 = f(r1);
        exhausted(r1);
      }
      e_hi = bisect_root([&](double l) { return f(l) - 2; }, r0, r1, fr0 - 2,
                         fr1 - 2);
      degenerate = (e_hi - e_lo) < deg_tol;
      if (degenerate) e_lo = e_hi = c;
    }

    if (sgn < 0) {
      edges.mu.push_back(e_lo);
      edges.mu.push_back(e_hi);
    } else {
      edges.nu.push_back(e_lo);
      edges.nu.push_back(e_hi);
    }
    edges.gap_degenerate.push_back(degenerate);
    prev_edge = e_hi;
  }
  if (!check_interlacing(edges))
    throw ComputationError(
        "find_band_edges: computed edges violate the interlacing order");
  return edges;
}

SpectralPartition make_partition(const BandEdges& edges) {
  SpectralPartition part;
  const int g_count = edges.n_gaps();
  for (int g = 0; g < g_count; ++g) {
    GapInterval gap;
    gap.index = g;
    gap.degenerate = edges.gap_degenerate[g];
    if (g % 2 == 0) {
      gap.kind = GapKind::semi_periodic;
      gap.lo = edges.mu.at(g);
      gap.hi = edges.mu.at(g + 1);
    } else {
      gap.kind = GapKind::periodic;
      gap.lo = edges.nu.at(g);
      gap.hi = edges.nu.at(g + 1);
    }
    part.gaps.push_back(gap);
  }
  for (int b = 0; b < g_count; ++b) {
    BandInterval band;
    band.index = b;
    band.lo = (b == 0) ? edges.nu.at(0) : part.gaps[b - 1].hi;
    band.hi = part.gaps[b].lo;
    part.bands.push_back(band);
  }
  return part;
}

int SpectralPartition::gap_containing(double lambda) const {
  for (const GapInterval& gap : gaps)
    if (lambda >= gap.lo && lambda <= gap.hi) return gap.index;
  return -1;
}

bool check_interlacing(const BandEdges& edges) {
  const SpectralPartition part = make_partition(edges);
  double prev = edges.nu.at(0);
  for (std::size_t g = 0; g < part.gaps.size(); ++g) {
    const GapInterval& gap = part.gaps[g];
    if (!(prev < gap.lo)) return false;   // band must have positive width
    if (!(gap.lo <= gap.hi)) return false;
    prev = gap.hi;
  }
  return true;
}

double dispersion_alpha(const PeriodicCoefficients& coeffs, double lambda,
                        const SpectralPartition* partition) {
  const double d = discriminant(coeffs, lambda);
  if (!(std::abs(d) < 2)) {
    std::ostringstream msg;
    msg << "lambda=" << lambda << " is not inside a stability interval (D=" << d
        << ")";
    if (partition) {
      const int g = partition->gap_containing(lambda);
      if (g >= 0) msg << "; it falls into gap " << g;
    }
    throw ValidationError(msg.str());
  }
  return std::acos(0.5 * d) / coeffs.period;
}

double decay_beta(const PeriodicCoefficients& coeffs, double lambda) {
  const double d = discriminant(coeffs, lambda);
  if (std::abs(d) < 2 - 1e-9) {
    std::ostringstream msg;
    msg << "lambda=" << lambda << " lies strictly inside a stability interval (D="
        << d << ")";
    throw ValidationError(msg.str());
  }
  const double arg = std::max(1.0, 0.5 * std::abs(d));
  return std::acosh(arg) / coeffs.period;
}

namespace {

// Zeros of a sampled one-period solution in [0, a), refined by bisection.
// Sign changes between adjacent samples are assumed simple (true for
// Sturm-Liouville eigenfunctions once the grid resolves them).
std::vector<double> zeros_from_samples(const PeriodicCoefficients& coeffs,
                                       const SolutionSamples& s) {
  std::vector<double> zeros;
  const std::size_t n = s.grid.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double y0 = s.y[i];
    const double y1 = s.y[i + 1];
    if (y0 == 0) {
      zeros.push_back(s.grid[i]);
    } else if (y0 * y1 < 0) {
      const double gy = s.y[i];
      const double gpy = s.py[i];
      const double gx = s.grid[i];
      auto eval = [&](double xx) {
        double yy = gy, pyy = gpy;
        propagate(coeffs, s.lambda, gx, xx).apply(yy, pyy);
        return yy;
      };
      zeros.push_back(
          bisect_root(eval, s.grid[i], s.grid[i + 1], y0, y1));
    }
  }
  return zeros;
}

std::vector<double> uniform_grid(double lo, double hi, int intervals) {
  std::vector<double> g(intervals + 1);
  for (int i = 0; i <= intervals; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / intervals;
  g.back() = hi;
  return g;
}

int degenerate_gap_of_edge(const BandEdges& edges, EdgeKind kind, int index) {
  int g = -1;
  if (kind == EdgeKind::semi_periodic) {
    g = (index % 2 == 0) ? index : index - 1;
  } else {
    if (index == 0) return -1;
    g = (index % 2 == 1) ? index : index - 1;
  }
  if (g < 0 || g >= edges.n_gaps()) return -1;
  return g;
}

}  // namespace

std::vector<EdgeEigenfunction> edge_eigenfunction(const PeriodicCoefficients& coeffs,
                                                  const BandEdges& edges,
                                                  EdgeKind kind, int index) {
  const std::vector<double>& list =
      (kind == EdgeKind::periodic) ? edges.nu : edges.mu;
  if (index < 0 || index >= static_cast<int>(list.size()))
    throw ValidationError("edge_eigenfunction: edge index out of range");
  const double lambda = list[index];
  const double sigma = (kind == EdgeKind::periodic) ? 1.0 : -1.0;

  const TransferMatrix m = monodromy(coeffs, lambda, 0.0);
  if (std::abs(m.trace() - 2 * sigma) > 1e-6) {
    std::ostringstream msg;
    msg << "edge_eigenfunction: |D -+ 2| = " << std::abs(m.trace() - 2 * sigma)
        << " at the supplied edge; edge data is stale";
    throw ComputationError(msg.str());
  }

  std::vector<std::array<double, 2>> states;
  const int g = degenerate_gap_of_edge(edges, kind, index);
  const bool degenerate = (g >= 0 && edges.gap_degenerate[g]);
  if (degenerate) {
    states.push_back({1.0, 0.0});
    states.push_back({0.0, 1.0});
  } else {
    const std::array<double, 2> c1 = {m.m12, sigma - m.m11};
    const std::array<double, 2> c2 = {sigma - m.m22, m.m21};
    const double n1 = std::hypot(c1[0], c1[1]);
    const double n2 = std::hypot(c2[0], c2[1]);
    std::array<double, 2> v = (n1 >= n2) ? c1 : c2;
    const double norm = std::max(std::abs(v[0]), std::abs(v[1]));
    if (norm == 0)
      throw ComputationError("edge_eigenfunction: vanishing monodromy eigenvector");
    const double sign = (std::abs(v[0]) >= std::abs(v[1]))
                            ? (v[0] > 0 ? 1.0 : -1.0)
                            : (v[1] > 0 ? 1.0 : -1.0);
    v[0] *= sign / norm;
    v[1] *= sign / norm;
    states.push_back(v);
  }

  std::vector<EdgeEigenfunction> out;
  for (const auto& v : states) {
    int intervals = 2048;
    EdgeEigenfunction ef;
    ef.kind = kind;
    ef.index = index;
    ef.lambda = lambda;
    for (;;) {
      const std::vector<double> grid = uniform_grid(0.0, coeffs.period, intervals);
      ef.samples = solve_ivp(coeffs, lambda, 0.0, v[0], v[1], grid);
      ef.zeros = zeros_from_samples(coeffs, ef.samples);
      // a zero at the origin reappears just inside the right end when the
      // edge eigenvalue carries roundoff; count the pair once
      if (ef.zeros.size() >= 2 && ef.zeros.front() < 1e-6 * coeffs.period &&
          ef.zeros.back() > (1.0 - 1e-6) * coeffs.period) {
        ef.zeros.pop_back();
      }
      // unresolved pair suspicion: zeros closer than two grid cells
      bool crowded = false;
      const double h = coeffs.period / intervals;
      for (std::size_t i = 0; i + 1 < ef.zeros.size(); ++i)
        if (ef.zeros[i + 1] - ef.zeros[i] < 2 * h) crowded = true;
      if (!crowded || intervals >= (1 << 15)) break;
      intervals *= 2;
    }
    out.push_back(std::move(ef));
  }
  return out;
}

}  // namespace hillband
