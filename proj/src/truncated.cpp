// SPDX-License-Identifier: Apache-2.0
#include "hillband/truncated.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hillband {

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double bisect_root(F&& f, double lo, double hi, double flo, double fhi,
                   double rel_tol = 1e-10) {
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw ComputationError("bisect_root: endpoints do not bracket a sign change");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::max(1.0, std::abs(mid))) return mid;
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

GapStateSubtype classify_multiplier(double rho) {
  if (std::abs(rho - 1.0) < 1e-6) return GapStateSubtype::band_edge_periodic;
  if (std::abs(rho + 1.0) < 1e-6) return GapStateSubtype::band_edge_semi_periodic;
  return std::abs(rho) < 1.0 ? GapStateSubtype::surface_left
                             : GapStateSubtype::surface_right;
}

}  // namespace

const char* subtype_name(GapStateSubtype t) {
  switch (t) {
    case GapStateSubtype::surface_left: return "surface_left";
    case GapStateSubtype::surface_right: return "surface_right";
    case GapStateSubtype::band_edge_periodic: return "band_edge_periodic";
    case GapStateSubtype::band_edge_semi_periodic: return "band_edge_semi_periodic";
    case GapStateSubtype::degenerate_gap: return "degenerate_gap";
  }
  return "unknown";
}

std::vector<BandState> band_states(const PeriodicCoefficients& coeffs,
                                   const SpectralPartition& partition,
                                   int band_index, int n_cells, Exec exec) {
  if (n_cells < 1) throw ValidationError("band_states: n_cells must be >= 1");
  if (band_index < 0 || band_index >= static_cast<int>(partition.bands.size()))
    throw ValidationError("band_states: band index not in computed partition");
  const BandInterval& band = partition.bands[band_index];

  std::vector<BandState> out(std::max(0, n_cells - 1));
  const double d_lo = discriminant(coeffs, band.lo);
  const double d_hi = discriminant(coeffs, band.hi);
  parallel_for(exec, out.size(), [&](std::size_t k) {
    const int j = static_cast<int>(k) + 1;
    const double target = 2.0 * std::cos(j * kPi / n_cells);
    const double flo = d_lo - target;
    const double fhi = d_hi - target;
    if ((flo < 0) == (fhi < 0)) {
      std::ostringstream msg;
      msg << "band_states: root for j=" << j << " not bracketed in band "
          << band_index << " [" << band.lo << ", " << band.hi
          << "]; partition or tolerance bug";
      throw ComputationError(msg.str());
    }
    const double lambda = bisect_root(
        [&](double l) { return discriminant(coeffs, l) - target; }, band.lo,
        band.hi, flo, fhi);
    out[k] = BandState{band_index, j, lambda};
  });
  return out;
}

GapState gap_state(const PeriodicCoefficients& coeffs, const GapInterval& gap,
                   double tau) {
  GapState st;
  st.gap_index = gap.index;
  st.kind = gap.kind;

  if (gap.degenerate) {
    st.lambda = gap.lo;
    st.rho = (gap.kind == GapKind::semi_periodic) ? -1.0 : 1.0;
    st.subtype = GapStateSubtype::degenerate_gap;
    return st;
  }

  // shooting function: y(tau + a) for the solution with y(tau)=0, (py')(tau)=1
  auto g = [&](double lambda) {
    return propagate(coeffs, lambda, tau, tau + coeffs.period).m12;
  };

  int points = 64;
  double root = std::numeric_limits<double>::quiet_NaN();
  for (;;) {
    std::vector<double> xs(points + 1), gs(points + 1);
    double gmax = 0;
    for (int i = 0; i <= points; ++i) {
      xs[i] = gap.lo + gap.width() * static_cast<double>(i) / points;
      gs[i] = g(xs[i]);
      gmax = std::max(gmax, std::abs(gs[i]));
    }
    int crossings = 0;
    int first = -1;
    for (int i = 0; i < points; ++i) {
      if (gs[i] == 0 || gs[i] * gs[i + 1] < 0) {
        ++crossings;
        if (first < 0) first = i;
      }
    }
    if (gs[points] == 0) {
      ++crossings;
      if (first < 0) first = points;
    }

    if (crossings == 1) {
      if (gs[first] == 0) {
        root = xs[first];
      } else {
        root = bisect_root(g, xs[first], xs[first + 1], gs[first], gs[first + 1]);
      }
      break;
    }
    if (crossings == 0) {
      // The unique root may sit exactly on a gap edge (tau at a zero of the
      // edge eigenfunction); accept an endpoint where g is negligible.
      const double lo_mag = std::abs(gs.front());
      const double hi_mag = std::abs(gs.back());
      const double tol = 1e-8 * std::max(gmax, 1e-30);
      if (std::min(lo_mag, hi_mag) < tol) {
        root = (lo_mag <= hi_mag) ? gap.lo : gap.hi;
        break;
      }
    }
    if (points >= 4096) {
      std::ostringstream msg;
      msg << "gap_state: expected exactly one root of the boundary condition in gap "
          << gap.index << " [" << gap.lo << ", " << gap.hi << "] at tau=" << tau
          << " but found " << crossings << " sign changes at " << points
          << " scan points; implementation bug";
      throw ComputationError(msg.str());
    }
    points *= 4;
  }

  st.lambda = root;
  st.rho = propagate(coeffs, root, tau, tau + coeffs.period).m22;
  st.subtype = classify_multiplier(st.rho);
  return st;
}

std::vector<TruncatedSpectrum::Entry> TruncatedSpectrum::merged() const {
  std::vector<Entry> all;
  all.reserve(band_states.size() + gap_states.size());
  for (std::size_t i = 0; i < band_states.size(); ++i)
    all.push_back({band_states[i].lambda, false, static_cast<int>(i)});
  for (std::size_t i = 0; i < gap_states.size(); ++i)
    all.push_back({gap_states[i].lambda, true, static_cast<int>(i)});
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.is_gap_state != b.is_gap_state) return !a.is_gap_state;
    return a.list_index < b.list_index;
  });
  return all;
}

std::vector<double> TruncatedSpectrum::all_lambdas_sorted() const {
  std::vector<double> out;
  for (const Entry& e : merged()) {
    out.push_back(e.lambda);
  }
  return out;
}

TruncatedSpectrum classify_spectrum(const PeriodicCoefficients& coeffs,
                                    const SpectralPartition& partition,
                                    const TruncationConfig& config, int n_bands,
                                    Exec exec) {
  if (config.n_cells < 1)
    throw ValidationError("classify_spectrum: n_cells must be >= 1");
  if (n_bands < 1 || n_bands > static_cast<int>(partition.bands.size()))
    throw ValidationError("classify_spectrum: n_bands not covered by partition");

  TruncatedSpectrum spec;
  spec.config = config;
  for (int b = 0; b < n_bands; ++b) {
    const std::vector<BandState> bs =
        band_states(coeffs, partition, b, config.n_cells, exec);
    spec.band_states.insert(spec.band_states.end(), bs.begin(), bs.end());
  }
  const int n_gaps = n_bands - 1;  // gaps between the covered bands
  spec.gap_states.resize(n_gaps);
  parallel_for(exec, static_cast<std::size_t>(n_gaps), [&](std::size_t g) {
    spec.gap_states[g] = gap_state(coeffs, partition.gaps.at(g), config.tau);
  });
  return spec;
}

namespace {

// Completed up-down pairs of a periodic sampled curve (first sample ==
// last sample up to noise). Differences below `suppress` are treated as
// flat; the count is the number of cyclic +to- sign transitions.
int count_up_downs(const std::vector<double>& values, double suppress) {
  std::vector<int> signs;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double d = values[i + 1] - values[i];
    if (std::abs(d) <= suppress) continue;
    const int s = d > 0 ? 1 : -1;
    if (signs.empty() || signs.back() != s) signs.push_back(s);
  }
  if (signs.size() < 2) return 0;
  int count = 0;
  const std::size_t n = signs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (signs[i] > 0 && signs[(i + 1) % n] < 0) ++count;
  }
  return count;
}

}  // namespace

TauSweep tau_sweep(const PeriodicCoefficients& coeffs, const GapInterval& gap,
                   double tau0, int n_points, Exec exec) {
  if (n_points < 64) throw ValidationError("tau_sweep: n_points must be >= 64");
  if (gap.degenerate && gap.width() > 0)
    throw ValidationError("tau_sweep: inconsistent gap interval");

  TauSweep sweep;
  sweep.gap_index = gap.index;
  const double a = coeffs.period;
  sweep.tau_grid.resize(n_points);
  sweep.lambdas.resize(n_points);
  sweep.subtypes.resize(n_points);
  for (int i = 0; i < n_points; ++i)
    sweep.tau_grid[i] = tau0 + a * static_cast<double>(i) / (n_points - 1);
  sweep.tau_grid.back() = tau0 + a;

  parallel_for(exec, static_cast<std::size_t>(n_points), [&](std::size_t i) {
    const GapState st = gap_state(coeffs, gap, sweep.tau_grid[i]);
    sweep.lambdas[i] = st.lambda;
    sweep.subtypes[i] = st.subtype;
  });

  sweep.extrema_count =
      count_up_downs(sweep.lambdas, 1e-9 * std::max(gap.width(), 1e-12));

  if (!gap.degenerate) {
    // Refine the tau values where Lambda(tau) touches an edge. The touch
    // condition is that the boundary-value function G(t) = m12 of the
    // one-period propagator at the edge eigenvalue vanishes; G is
    // proportional to the square of the edge eigenfunction at t, so it
    // touches zero quadratically and must be located as a minimum of |G|,
    // not as a sign change.
    auto touches = [&](double edge_lambda) {
      std::vector<EdgeTouch> result;
      auto absG = [&](double t) {
        return std::abs(propagate(coeffs, edge_lambda, t, t + a).m12);
      };
      const std::size_t n = sweep.tau_grid.size();
      const std::size_t np = n - 1;  // distinct points (last == first + a)
      std::vector<double> vals(np);
      parallel_for(exec, np,
                   [&](std::size_t i) { vals[i] = absG(sweep.tau_grid[i]); });
      double vmax = 0;
      for (double v : vals) vmax = std::max(vmax, v);
      if (vmax == 0) return result;
      const double spacing = a / static_cast<double>(np);
      for (std::size_t i = 0; i < np; ++i) {
        const double left = vals[(i + np - 1) % np];
        const double right = vals[(i + 1) % np];
        if (!(vals[i] <= left && vals[i] <= right && vals[i] < 1e-3 * vmax))
          continue;
        double t = sweep.tau_grid[i];
        for (double h : {spacing, 1e-4 * a, 1e-5 * a}) {
          const double fm = absG(t - h), f0 = absG(t), fp = absG(t + h);
          const double denom = fm - 2 * f0 + fp;
          if (denom <= 0) continue;
          const double shift = 0.5 * h * (fm - fp) / denom;
          if (std::abs(shift) <= h) t += shift;
        }
        if (t < tau0) t += a;
        if (t >= tau0 + a) t -= a;
        bool duplicate = false;
        for (const EdgeTouch& e : result)
          if (std::abs(e.tau - t) < 1e-6 * a) duplicate = true;
        if (duplicate) continue;
        result.push_back({t, gap_state(coeffs, gap, t).lambda});
      }
      std::sort(result.begin(), result.end(),
                [](const EdgeTouch& x, const EdgeTouch& y) { return x.tau < y.tau; });
      return result;
    };
    sweep.lower_touches = touches(gap.lo);
    sweep.upper_touches = touches(gap.hi);
  }
  return sweep;
}

TruncatedEigenfunction eigenfunction(const PeriodicCoefficients& coeffs,
                                     double lambda,
                                     const TruncationConfig& config,
                                     int grid_per_cell) {
  if (config.n_cells < 1 || grid_per_cell < 2)
    throw ValidationError("eigenfunction: need n_cells >= 1 and grid_per_cell >= 2");
  const double a = coeffs.period;
  const double L = config.length(a);
  const int n = config.n_cells * grid_per_cell;
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i)
    grid[i] = config.tau + L * static_cast<double>(i) / n;
  grid.back() = config.tau + L;

  TruncatedEigenfunction ef;
  ef.samples = solve_ivp(coeffs, lambda, config.tau, 0.0, 1.0, grid);

  double ymax = 0;
  for (double v : ef.samples.y) ymax = std::max(ymax, std::abs(v));
  if (ymax == 0) throw ComputationError("eigenfunction: trivial solution");
  ef.endpoint_residual = std::abs(ef.samples.y.back()) / ymax;
  if (ef.endpoint_residual > 1e-6) {
    std::ostringstream msg;
    msg << "eigenfunction: endpoint residual " << ef.endpoint_residual
        << " exceeds 1e-6 at lambda=" << lambda
        << "; eigenvalue is stale, recompute it";
    throw ComputationError(msg.str());
  }

  // s-weighted norm and per-cell masses by the composite trapezoid rule
  const double h = L / n;
  auto cell_mass = [&](int cell) {
    double m = 0;
    const int i0 = cell * grid_per_cell;
    for (int i = i0; i < i0 + grid_per_cell; ++i) {
      const double f0 =
          coeffs.evaluate(grid[i]).s * ef.samples.y[i] * ef.samples.y[i];
      const double f1 = coeffs.evaluate(grid[i + 1]).s * ef.samples.y[i + 1] *
                        ef.samples.y[i + 1];
      m += 0.5 * h * (f0 + f1);
    }
    return m;
  };
  double total = 0;
  for (int c = 0; c < config.n_cells; ++c) total += cell_mass(c);
  const double scale = 1.0 / std::sqrt(total);
  for (double& v : ef.samples.y) v *= scale;
  for (double& v : ef.samples.py) v *= scale;
  ef.first_cell_mass = cell_mass(0);
  ef.last_cell_mass = cell_mass(config.n_cells - 1);
  return ef;
}

}  // namespace hillband
