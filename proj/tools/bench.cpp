// SPDX-License-Identifier: Apache-2.0
//
// Timing comparison of the serial reference path (Exec::seq) against the
// OpenMP path (Exec::par) for the batch kernels, with a result-equality
// check: both paths must produce bit-identical output.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "hillband/oracle.hpp"
#include "hillband/spectrum.hpp"
#include "hillband/transfer.hpp"
#include "hillband/truncated.hpp"

using namespace hillband;

namespace {

double seconds_of(const std::chrono::steady_clock::time_point& t0) {
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

// one untimed warm-up run, then the best of three timed repeats
template <class F>
double timed(F&& f) {
  f();
  double best = 1e9;
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, seconds_of(t0));
  }
  return best;
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

void report(const char* name, double t_seq, double t_par, bool equal) {
  std::printf("%-24s seq %8.3f ms   omp %8.3f ms   speedup %5.2fx   results %s\n",
              name, 1e3 * t_seq, 1e3 * t_par, t_seq / t_par,
              equal ? "identical" : "DIFFER");
}

}  // namespace

int main() {
  const PeriodicCoefficients kp = PeriodicCoefficients::kronig_penney(1.0, 10.0, 0.5);
  std::printf("threads available: %d\n\n", max_threads());

  {
    const int n = 20000;
    std::vector<double> lambdas(n);
    for (int i = 0; i < n; ++i) lambdas[i] = -5.0 + 120.0 * i / (n - 1);
    std::vector<double> r_seq, r_par;
    const double ts = timed([&] { r_seq = discriminant_scan(kp, lambdas, Exec::seq); });
    const double tp = timed([&] { r_par = discriminant_scan(kp, lambdas, Exec::par); });
    report("discriminant_scan", ts, tp, same(r_seq, r_par));
  }

  const BandEdges edges = find_band_edges(kp, 3);
  const SpectralPartition part = make_partition(edges);

  {
    const int n_cells = 512;
    std::vector<BandState> r_seq, r_par;
    const double ts =
        timed([&] { r_seq = band_states(kp, part, 1, n_cells, Exec::seq); });
    const double tp =
        timed([&] { r_par = band_states(kp, part, 1, n_cells, Exec::par); });
    bool equal = r_seq.size() == r_par.size();
    for (std::size_t i = 0; equal && i < r_seq.size(); ++i)
      equal = r_seq[i].lambda == r_par[i].lambda;
    report("band_states", ts, tp, equal);
  }

  {
    TauSweep s_seq, s_par;
    const double ts = timed([&] { s_seq = tau_sweep(kp, part.gaps[0], 0.0, 256, Exec::seq); });
    const double tp = timed([&] { s_par = tau_sweep(kp, part.gaps[0], 0.0, 256, Exec::par); });
    report("tau_sweep", ts, tp, same(s_seq.lambdas, s_par.lambdas));
  }

  {
    const oracle::DiscreteOperator op =
        oracle::assemble(kp, 0.0, 8, 8192, oracle::BoundaryKind::dirichlet);
    const double cap = part.bands[2].hi;
    std::vector<double> r_seq, r_par;
    const double ts = timed([&] { r_seq = oracle::eigenvalues_below(op, cap, Exec::seq); });
    const double tp = timed([&] { r_par = oracle::eigenvalues_below(op, cap, Exec::par); });
    report("oracle eigenvalues", ts, tp, same(r_seq, r_par));
  }

  return 0;
}
