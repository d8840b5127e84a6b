// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance runs. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hillband/oracle.hpp"
#include "hillband/truncated.hpp"

using namespace hillband;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(int id, bool pass, const std::string& name, const std::string& detail) {
  std::printf("criterion %d %s: %s (%s)\n", id, pass ? "PASS" : "FAIL",
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// 1. Free-particle band states are exactly (j pi / L)^2.
void criterion_1() {
  const double t0 = now_seconds();
  const auto free = PeriodicCoefficients::free_particle(1.0);
  const SpectralPartition part = make_partition(find_band_edges(free, 1));
  const auto states = band_states(free, part, 0, 4);
  double worst = 0;
  bool pass = states.size() == 3;
  for (std::size_t i = 0; pass && i < states.size(); ++i) {
    const double expect = ((i + 1) * kPi / 4) * ((i + 1) * kPi / 4);
    worst = std::max(worst, std::abs(states[i].lambda - expect) / expect);
  }
  const double elapsed = now_seconds() - t0;
  pass = pass && worst < 1e-9 && elapsed < 1.0;
  report(1, pass, "free-particle band-state exactness",
         "worst rel err " + fmt(worst) + ", " + fmt(elapsed) + " s");
}

// 2. Classification counting against the Richardson oracle.
void criterion_2(const PeriodicCoefficients& kp, const SpectralPartition& part) {
  const double t0 = now_seconds();
  const TruncationConfig cfg{0.0, 8};
  const TruncatedSpectrum spec = classify_spectrum(kp, part, cfg, 3);

  bool counts_ok = spec.gap_states.size() == 2;
  for (int b = 0; b < 3; ++b) {
    int in_band = 0;
    for (const BandState& st : spec.band_states)
      if (st.band_index == b) ++in_band;
    counts_ok = counts_ok && in_band == 7;
  }

  const auto lambdas = spec.all_lambdas_sorted();
  const double cap = 0.5 * (lambdas.back() + part.gaps[2].lo);
  const auto oracle_vals = oracle::eigenvalues_below_richardson(
      kp, 0.0, 8, 8192, oracle::BoundaryKind::dirichlet, cap);
  const auto rep = oracle::compare(oracle_vals, spec, 1e-4);
  const double elapsed = now_seconds() - t0;
  const bool pass = counts_ok && rep.pass && elapsed < 30.0;
  report(2, pass, "classification counts vs discrete oracle",
         std::to_string(rep.count_oracle) + " oracle vs " +
             std::to_string(rep.count_predicted) + " predicted, worst rel err " +
             fmt(rep.worst_rel_err) + ", " + fmt(elapsed) + " s");
}

// 3. Band states do not move with tau.
void criterion_3(const PeriodicCoefficients& kp, const SpectralPartition& part) {
  const double taus[] = {0.0, 0.13, 0.5};
  std::vector<std::vector<double>> spectra;
  for (double tau : taus) {
    const TruncationConfig cfg{tau, 8};
    const TruncatedSpectrum spec = classify_spectrum(kp, part, cfg, 3);
    std::vector<double> vals;
    for (const BandState& st : spec.band_states) vals.push_back(st.lambda);
    spectra.push_back(std::move(vals));
  }
  double worst = 0;
  bool pass = true;
  for (std::size_t i = 0; i < spectra.size(); ++i)
    for (std::size_t k = i + 1; k < spectra.size(); ++k) {
      pass = pass && spectra[i].size() == spectra[k].size();
      for (std::size_t n = 0; pass && n < spectra[i].size(); ++n)
        worst = std::max(worst, std::abs(spectra[i][n] - spectra[k][n]) /
                                    std::max(1.0, std::abs(spectra[i][n])));
    }
  pass = pass && worst < 1e-9;
  report(3, pass, "tau-independence of band states",
         "worst pairwise rel diff " + fmt(worst));
}

// 4. Gap-state eigenvalue does not move with the truncation length; the
// discrete oracle tracks it with shrinking residuals inside the e^{-beta N a}
// envelope.
void criterion_4(const PeriodicCoefficients& kp, const SpectralPartition& part) {
  const double tau = 0.5;
  const GapState st = gap_state(kp, part.gaps[0], tau);
  const double beta = decay_beta(kp, st.lambda);
  bool pass = true;
  std::ostringstream detail;
  detail << "Lambda " << st.lambda << ", beta*a " << fmt(beta);
  double prev = 0;
  for (int n_cells : {4, 8, 16}) {
    const double ev = oracle::gap_eigenvalue(kp, tau, n_cells, 128 * n_cells * n_cells,
                                             part.gaps[0], false);
    const double residual = std::abs(ev - st.lambda);
    detail << ", r" << n_cells << " " << fmt(residual);
    if (residual > std::exp(-beta * n_cells)) pass = false;  // envelope
    if (prev > 0 && !(residual < 0.5 * prev)) pass = false;  // halving
    prev = residual;
  }
  report(4, pass, "L-independence of the gap state", detail.str());
}

// 5. Oscillation law of the tau sweep and edge touches at eigenfunction zeros.
void criterion_5(const PeriodicCoefficients& kp, const SpectralPartition& part,
                 const BandEdges& edges, TauSweep& sweep0_out) {
  bool pass = true;
  std::ostringstream detail;

  auto zeros_of = [&](EdgeKind kind, int index) {
    const auto efs = edge_eigenfunction(kp, edges, kind, index);
    return efs.at(0).zeros;
  };
  auto touches_match = [&](const std::vector<EdgeTouch>& touches,
                           const std::vector<double>& zeros, double edge) {
    if (touches.size() != zeros.size()) return false;
    for (std::size_t i = 0; i < touches.size(); ++i) {
      if (std::abs(touches[i].tau - zeros[i]) > 1e-6) return false;
      if (std::abs(touches[i].lambda - edge) > 1e-6) return false;
    }
    return true;
  };

  const TauSweep s0 = tau_sweep(kp, part.gaps[0], 0.0, 512);
  pass = pass && s0.extrema_count == 1;
  pass = pass && touches_match(s0.lower_touches,
                               zeros_of(EdgeKind::semi_periodic, 0), part.gaps[0].lo);
  pass = pass && touches_match(s0.upper_touches,
                               zeros_of(EdgeKind::semi_periodic, 1), part.gaps[0].hi);
  detail << "gap0 " << s0.extrema_count << " up-down, " << s0.lower_touches.size()
         << "+" << s0.upper_touches.size() << " touches";

  const TauSweep s1 = tau_sweep(kp, part.gaps[1], 0.0, 512);
  pass = pass && s1.extrema_count == 2;
  pass = pass && touches_match(s1.lower_touches, zeros_of(EdgeKind::periodic, 1),
                               part.gaps[1].lo);
  pass = pass && touches_match(s1.upper_touches, zeros_of(EdgeKind::periodic, 2),
                               part.gaps[1].hi);
  detail << "; gap1 " << s1.extrema_count << " ups-downs, "
         << s1.lower_touches.size() << "+" << s1.upper_touches.size() << " touches";

  sweep0_out = s0;
  report(5, pass, "tau-sweep oscillation law and edge touches", detail.str());
}

// 6. The multiplier, the decay rate and the mass distribution agree.
void criterion_6(const PeriodicCoefficients& kp, const SpectralPartition& part,
                 const TauSweep& sweep0) {
  bool pass = true;
  double worst_beta_diff = 0;
  int tested = 0, mass_checked = 0;

  const TauSweep sweep1 = tau_sweep(kp, part.gaps[1], 0.0, 512);
  const TauSweep* sweeps[2] = {&sweep0, &sweep1};
  for (const TauSweep* sweep : sweeps) {
    const GapInterval& gap = part.gaps[sweep->gap_index];
    const std::size_t n = sweep->tau_grid.size() - 1;
    std::vector<int> verdicts(n, 1);  // 1 ok, 0 fail
    std::vector<double> beta_diffs(n, 0.0);
    std::vector<int> counted(n, 0), mass_runs(n, 0);
    parallel_for(Exec::par, n, [&](std::size_t i) {
      const double tau = sweep->tau_grid[i];
      const GapState st = gap_state(kp, gap, tau);
      if (st.subtype != GapStateSubtype::surface_left &&
          st.subtype != GapStateSubtype::surface_right)
        return;
      const double lr = std::log(std::abs(st.rho));
      if (std::abs(lr) <= 1e-3) return;
      counted[i] = 1;
      const double beta = decay_beta(kp, st.lambda);
      beta_diffs[i] = std::abs(std::abs(lr) - beta);
      if (beta_diffs[i] >= 1e-6) verdicts[i] = 0;
      const TruncationConfig cfg{tau, 8};
      const TruncatedEigenfunction ef = eigenfunction(kp, st.lambda, cfg, 128);
      mass_runs[i] = 1;
      const bool left_heavy = ef.first_cell_mass > ef.last_cell_mass;
      if (left_heavy != (lr < 0)) verdicts[i] = 0;
    });
    for (std::size_t i = 0; i < n; ++i) {
      if (!verdicts[i]) pass = false;
      worst_beta_diff = std::max(worst_beta_diff, beta_diffs[i]);
      tested += counted[i];
      mass_checked += mass_runs[i];
    }
  }
  pass = pass && tested > 0;
  report(6, pass, "multiplier vs decay rate vs mass localization",
         std::to_string(tested) + " sweep points, worst |log|rho|| - beta*a| = " +
             fmt(worst_beta_diff) + ", " + std::to_string(mass_checked) +
             " eigenfunctions checked");
}

// 7. Structural invariants: unimodularity, interlacing, zero counts,
// emptiness below nu_0.
void criterion_7(const PeriodicCoefficients& kp) {
  bool pass = true;
  std::ostringstream detail;

  // monodromy determinant over 200 random (model, lambda, tau) triples
  {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> lam(-10.0, 100.0);
    std::uniform_real_distribution<double> taus(-2.0, 2.0);
    const PeriodicCoefficients models[] = {
        PeriodicCoefficients::free_particle(1.0),
        PeriodicCoefficients::constant_shift(1.0, 3.0),
        kp,
        PeriodicCoefficients::mathieu(1.0, 2.0),
        PeriodicCoefficients::piecewise(
            1.0, {{0.3, 2.0, -1.0, 1.5}, {0.2, 0.5, 4.0, 1.0}, {0.5, 1.0, 0.0, 2.0}}),
    };
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
      const TransferMatrix m = monodromy(models[i % 5], lam(rng), taus(rng));
      worst = std::max(worst, std::abs(m.det() - 1.0));
    }
    pass = pass && worst < 1e-10;
    detail << "worst |det-1| " << fmt(worst);
  }

  // interlacing for two models, three gaps each
  const auto mat = PeriodicCoefficients::mathieu(1.0, 2.0);
  const BandEdges kp_edges = find_band_edges(kp, 3);
  const BandEdges mat_edges = find_band_edges(mat, 3);
  pass = pass && check_interlacing(kp_edges) && check_interlacing(mat_edges);
  detail << "; interlacing 2 models x 3 gaps";

  // zero counts of the semi-periodic eigenfunctions for m in {0, 1}
  {
    bool zeros_ok = true;
    for (const auto* model : {&kp, &mat}) {
      const BandEdges& edges = (model == &kp) ? kp_edges : mat_edges;
      for (int m = 0; m <= 1; ++m) {
        for (int idx : {2 * m, 2 * m + 1}) {
          for (const EdgeEigenfunction& ef :
               edge_eigenfunction(*model, edges, EdgeKind::semi_periodic, idx)) {
            if (static_cast<int>(ef.zeros.size()) != 2 * m + 1) zeros_ok = false;
          }
        }
      }
    }
    pass = pass && zeros_ok;
    detail << "; zero counts " << (zeros_ok ? "ok" : "WRONG");
  }

  // oracle emptiness below nu_0
  {
    bool empty_ok = true;
    for (const auto* model : {&kp, &mat}) {
      const BandEdges& edges = (model == &kp) ? kp_edges : mat_edges;
      for (double tau : {0.0, 0.37}) {
        const auto op =
            oracle::assemble(*model, tau, 4, 2048, oracle::BoundaryKind::dirichlet);
        const auto ev = oracle::eigenvalues_below(op, edges.nu[0] + 1.0);
        for (double v : ev)
          if (v < edges.nu[0] - 1e-3) empty_ok = false;
      }
    }
    pass = pass && empty_ok;
    detail << "; below-nu0 emptiness " << (empty_ok ? "ok" : "VIOLATED");
  }

  report(7, pass, "structural invariants", detail.str());
}

}  // namespace

int main() {
  const double t0 = now_seconds();
  const auto kp = PeriodicCoefficients::kronig_penney(1.0, 10.0, 0.5);
  const BandEdges edges = find_band_edges(kp, 3);
  const SpectralPartition part = make_partition(edges);

  criterion_1();
  criterion_2(kp, part);
  criterion_3(kp, part);
  criterion_4(kp, part);
  TauSweep sweep0;
  criterion_5(kp, part, edges, sweep0);
  criterion_6(kp, part, sweep0);
  criterion_7(kp);

  std::printf("%d of 7 criteria passed in %.1f s\n", 7 - g_failures,
              now_seconds() - t0);
  return g_failures == 0 ? 0 : 1;
}
