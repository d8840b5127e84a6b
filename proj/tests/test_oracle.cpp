// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>

#include <doctest.h>

#include "hillband/oracle.hpp"

using namespace hillband;
using oracle::BoundaryKind;

namespace {
constexpr double kPi = std::numbers::pi;
const PeriodicCoefficients kKp = PeriodicCoefficients::kronig_penney(1.0, 10.0, 0.5);
}  // namespace

TEST_CASE("free-particle Dirichlet pencil reproduces the discrete Laplacian") {
  const auto free = PeriodicCoefficients::free_particle(1.0);
  const auto op = oracle::assemble(free, 0.0, 1, 4, BoundaryKind::dirichlet);
  CHECK(op.h == doctest::Approx(0.2));
  for (double m : op.mass_diag) CHECK(m > 0);
  const auto ev = oracle::eigenvalues_below(op, 1e9);
  REQUIRE(ev.size() == 4);
  const double h = 0.2;
  for (int k = 1; k <= 4; ++k) {
    const double expect = (2 - 2 * std::cos(k * kPi / 5)) / (h * h);
    CHECK(ev[k - 1] == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("cap below the smallest eigenvalue yields an empty list") {
  const auto free = PeriodicCoefficients::free_particle(1.0);
  const auto op = oracle::assemble(free, 0.0, 1, 4, BoundaryKind::dirichlet);
  CHECK(oracle::eigenvalues_below(op, 1.0).empty());
}

TEST_CASE("assemble validates the grid") {
  CHECK_THROWS_AS(oracle::assemble(kKp, 0.0, 8, 100, BoundaryKind::dirichlet),
                  ValidationError);  // not a multiple of 8
  CHECK_THROWS_AS(oracle::assemble(kKp, 0.0, 1, 0, BoundaryKind::dirichlet),
                  ValidationError);
  CHECK(oracle::recommended_min_points(8) == 512);
}

TEST_CASE("cyclic inertia matches circulant closed forms") {
  const auto free = PeriodicCoefficients::free_particle(1.0);
  const int m = 16;
  const double h = 1.0 / m;
  for (BoundaryKind bk : {BoundaryKind::periodic, BoundaryKind::antiperiodic}) {
    const auto op = oracle::assemble(free, 0.0, 1, m, bk);
    std::vector<double> expect;
    for (int k = 0; k < m; ++k) {
      const double theta =
          (bk == BoundaryKind::periodic) ? 2 * kPi * k / m : (2 * k + 1) * kPi / m;
      expect.push_back((2 - 2 * std::cos(theta)) / (h * h));
    }
    std::sort(expect.begin(), expect.end());
    const auto got = oracle::eigenvalues_below(op, expect.back() + 1.0);
    REQUIRE(got.size() == expect.size());
    // doubled circulant eigenvalues split by ~1e-9 relative under roundoff
    // in the bordered elimination; assert eight digits
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(got[i] == doctest::Approx(expect[i]).scale(1.0).epsilon(1e-8));
    // inertia consistency at a few probe points
    for (double cap : {-1.0, 5.0, 120.0, 900.0}) {
      const auto list = oracle::eigenvalues_below(op, cap);
      CHECK(static_cast<int>(list.size()) == oracle::inertia_below(op, cap));
    }
  }
}

TEST_CASE("antiperiodic single-cell run approximates the semi-periodic edges") {
  // reference values from the transfer-matrix route
  const BandEdges e = find_band_edges(kKp, 1);
  const auto raw = oracle::eigenvalues_below(
      oracle::assemble(kKp, 0.0, 1, 4000, BoundaryKind::antiperiodic), e.mu[1] + 1);
  REQUIRE(raw.size() >= 2);
  CHECK(raw[0] == doctest::Approx(e.mu[0]).epsilon(1e-5));
  CHECK(raw[1] == doctest::Approx(e.mu[1]).epsilon(1e-5));
  const auto rich = oracle::eigenvalues_below_richardson(
      kKp, 0.0, 1, 4000, BoundaryKind::antiperiodic, e.mu[1] + 1);
  CHECK(std::abs(rich[0] - e.mu[0]) < std::abs(raw[0] - e.mu[0]) / 10);
  CHECK(std::abs(rich[1] - e.mu[1]) < std::abs(raw[1] - e.mu[1]) / 10);
}

TEST_CASE("h^2 convergence: error drops about fourfold per grid doubling") {
  const BandEdges e = find_band_edges(kKp, 1);
  const SpectralPartition part = make_partition(e);
  const auto bs = band_states(kKp, part, 0, 2);
  REQUIRE(bs.size() == 1);
  const double truth = bs[0].lambda;
  double prev_err = 0;
  for (int m : {256, 512, 1024}) {
    const auto op = oracle::assemble(kKp, 0.0, 2, m, BoundaryKind::dirichlet);
    const auto ev = oracle::eigenvalues_below(op, truth + 1.0);
    REQUIRE(!ev.empty());
    const double err = std::abs(ev[0] - truth);
    if (prev_err > 0) {
      const double factor = prev_err / err;
      CHECK(factor > 3.0);
      CHECK(factor < 5.0);
    }
    prev_err = err;
  }
}

TEST_CASE("no Dirichlet eigenvalue below nu_0") {
  const BandEdges e = find_band_edges(kKp, 1);
  for (double tau : {0.0, 0.3}) {
    const auto op = oracle::assemble(kKp, tau, 4, 1024, BoundaryKind::dirichlet);
    const auto ev = oracle::eigenvalues_below(op, e.nu[0] + 5.0);
    REQUIRE(!ev.empty());
    CHECK(ev[0] > e.nu[0] - 1e-3);
  }
}

TEST_CASE("comparison report") {
  TruncatedSpectrum pred;
  pred.band_states = {{0, 1, 1.0}, {0, 2, 2.0}, {0, 3, 3.0}};

  SUBCASE("identical lists pass with zero error") {
    const auto rep = oracle::compare({1.0, 2.0, 3.0}, pred, 1e-12);
    CHECK(rep.pass);
    CHECK(rep.worst_rel_err == 0.0);
  }
  SUBCASE("small perturbation measured") {
    const auto rep = oracle::compare({1.0, 2.0 + 2e-5, 3.0}, pred, 1e-4);
    CHECK(rep.pass);
    CHECK(rep.worst_rel_err == doctest::Approx(1e-5).epsilon(1e-3));
  }
  SUBCASE("tolerance violation fails") {
    const auto rep = oracle::compare({1.0, 2.1, 3.0}, pred, 1e-4);
    CHECK_FALSE(rep.pass);
  }
  SUBCASE("count mismatch fails and lists the unmatched value") {
    const auto rep = oracle::compare({1.0, 2.0}, pred, 1e-4);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.unmatched.size() == 1);
    CHECK(rep.unmatched[0] == 3.0);
  }
}

TEST_CASE("free-particle N=4 Richardson oracle vs closed-form band states") {
  const auto free = PeriodicCoefficients::free_particle(1.0);
  const auto ev = oracle::eigenvalues_below_richardson(
      free, 0.0, 4, 4096, BoundaryKind::dirichlet, 0.9 * kPi * kPi);
  REQUIRE(ev.size() == 3);
  for (int j = 1; j <= 3; ++j) {
    const double expect = (j * kPi / 4) * (j * kPi / 4);
    CHECK(std::abs(ev[j - 1] - expect) / expect < 1e-6);
  }
}
