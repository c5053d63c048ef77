#include <doctest.h>

#include <cmath>

#include "floquetlab/analytic.hpp"
#include "floquetlab/bessel.hpp"
#include "floquetlab/floquet_op.hpp"
#include "oracles.hpp"

using namespace floquetlab;

namespace {

ModelParams standard_params(double k, double tau, PhaseSign sign = PhaseSign::derived) {
  ModelParams p;
  p.kind = RotorKind::standard;
  p.k_kick = k;
  p.tau_free = tau;
  p.phase_sign = sign;
  return p;
}

ModelParams linear_params(double k, double phi) {
  ModelParams p;
  p.kind = RotorKind::linear;
  p.k_kick = k;
  p.phi_free = phi;
  return p;
}

ModelParams generic_params(double k, double tau, KickProfile profile) {
  ModelParams p;
  p.kind = RotorKind::generic;
  p.k_kick = k;
  p.tau_free = tau;
  p.kick_profile = std::move(profile);
  return p;
}

}  // namespace

TEST_CASE("standard builder: zero kick is the free diagonal") {
  const BasisSpec b(1, 1.0);
  const FloquetMatrix u = build_standard_floquet(standard_params(0.0, 1.0), b);
  CHECK(std::abs(u.entry(-1, -1) - std::polar(1.0, -0.5)) < 1e-15);
  CHECK(std::abs(u.entry(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(u.entry(1, 1) - std::polar(1.0, -0.5)) < 1e-15);
  CHECK(u.entries.cwiseAbs().sum() == doctest::Approx(3.0));  // off-diagonals exactly zero
}

TEST_CASE("standard builder entries against the series oracle") {
  const BasisSpec b(6, 1.0);
  const FloquetMatrix u = build_standard_floquet(standard_params(1.0, 1.0), b);
  // entry(0,1) = e^{-i/2} * (-i) * J_1(1)
  const Complex expected =
      std::polar(1.0, -0.5) * Complex(0, -1) * oracle::bessel_series(1, 1.0);
  CHECK(std::abs(u.entry(0, 1) - expected) < 1e-13);
  // diagonal: e^{-i n^2 tau/2} J_0(k)
  for (int n = -6; n <= 6; ++n) {
    const Complex diag = std::polar(1.0, -0.5 * n * n) * oracle::bessel_series(0, 1.0);
    CHECK(std::abs(u.entry(n, n) - diag) < 1e-13);
  }
}

TEST_CASE("paper phase sign flips the free diagonal") {
  const BasisSpec b(3, 1.0);
  const FloquetMatrix derived = build_standard_floquet(standard_params(0.7, 1.3), b);
  const FloquetMatrix paper =
      build_standard_floquet(standard_params(0.7, 1.3, PhaseSign::paper), b);
  for (int n = -3; n <= 3; ++n)
    for (int m = -3; m <= 3; ++m)
      CHECK(std::abs(paper.entry(n, m) - derived.entry(n, m) * std::polar(1.0, m * m * 1.3)) <
            1e-14);
}

TEST_CASE("Toeplitz-plus-diagonal structure") {
  const BasisSpec b(8, 1.0);
  const double tau = 0.9;
  const FloquetMatrix u = build_standard_floquet(standard_params(1.7, tau), b);
  for (int n = -6; n <= 6; ++n)
    for (int m = -6; m <= 6; ++m) {
      if (std::abs(n - m) > b.cutoff) continue;
      const Complex lhs = u.entry(n, m) / std::polar(1.0, -0.5 * m * m * tau);
      const Complex rhs = u.entry(n - m, 0);  // same m - n offset at column 0
      CHECK(std::abs(lhs - rhs) < 1e-14);
    }
}

TEST_CASE("interior columns of the standard operator have unit norm") {
  for (double k : {0.5, 2.0, 5.0}) {
    const BasisSpec b(default_cutoff(k), 1.0);
    const FloquetMatrix u = build_standard_floquet(standard_params(k, 1.0), b);
    const int margin = band_margin(k);
    for (int m = -b.cutoff; m <= b.cutoff; ++m) {
      if (std::abs(m) > b.cutoff - margin) continue;
      CHECK(std::abs(u.entries.col(b.index_of(m)).norm() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("band decay beyond the Bessel band") {
  for (double k : {0.5, 2.0, 5.0}) {
    const BasisSpec b(default_cutoff(k), 1.0);
    const FloquetMatrix u = build_standard_floquet(standard_params(k, 1.0), b);
    const int band = std::max(band_margin(k), bessel_effective_band(k));
    for (int n = -b.cutoff; n <= b.cutoff; ++n)
      for (int m = -b.cutoff; m <= b.cutoff; ++m)
        if (std::abs(n - m) > band) CHECK(std::abs(u.entry(n, m)) < 1e-14);
  }
}

TEST_CASE("zero-kick operator commutes with the momentum operator") {
  const BasisSpec b(4, 0.5);
  const FloquetMatrix u = build_standard_floquet(standard_params(0.0, 1.1), b);
  CMatrix p = CMatrix::Zero(b.dim(), b.dim());
  for (int i = 0; i < b.dim(); ++i) p(i, i) = b.n_of(i) * b.hbar_eff;
  CHECK((u.entries * p - p * u.entries).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("linear builder") {
  const BasisSpec b(5, 1.0);
  const double phi = 1.5707963267948966;  // pi/2

  SUBCASE("zero kick is the drift diagonal") {
    const FloquetMatrix u = build_linear_floquet(linear_params(0.0, 0.8), b);
    for (int m = -5; m <= 5; ++m)
      CHECK(std::abs(u.entry(m, m) - std::polar(1.0, -m * 0.8)) < 1e-15);
  }

  SUBCASE("entry(0,1) against the series oracle") {
    const FloquetMatrix u = build_linear_floquet(linear_params(1.0, phi), b);
    const Complex expected =
        std::polar(1.0, -phi) * Complex(0, 1) * oracle::bessel_series(1, 1.0);
    CHECK(std::abs(u.entry(0, 1) - expected) < 1e-13);
  }

  SUBCASE("equals the E(2) irrep with theta=phi_free, phi=pi/2, a=k_kick") {
    const FloquetMatrix u = build_linear_floquet(linear_params(1.3, 0.7), b);
    const CMatrix rep = e2_representation(e2_canonical(0.7, 1.3, phi), b);
    CHECK((u.entries - rep).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("generic builder reproduces limits and cross-checks") {
  const BasisSpec b(6, 1.0);
  const int grid = 64;  // power of two >= 4*dim = 52

  SUBCASE("zero profile gives the pure free diagonal") {
    const FloquetMatrix u = build_generic_floquet(
        generic_params(0.0, 0.9, KickProfile{std::vector<double>(grid, 0.0)}), b);
    for (int n = -6; n <= 6; ++n)
      for (int m = -6; m <= 6; ++m) {
        const Complex expect = n == m ? std::polar(1.0, -0.45 * m * m) : Complex(0, 0);
        CHECK(std::abs(u.entry(n, m) - expect) < 1e-13);
      }
  }

  SUBCASE("cosine profile matches the standard builder entrywise") {
    const double k = 1.4;
    const FloquetMatrix generic =
        build_generic_floquet(generic_params(k, 1.0, cosine_profile(k, grid)), b);
    const FloquetMatrix standard = build_standard_floquet(standard_params(k, 1.0), b);
    CHECK((generic.entries - standard.entries).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("sine profile coefficients match direct quadrature") {
    const double k = 0.9;
    const auto coeffs = kick_fourier_coefficients(sine_profile(k, grid).samples, 10);
    for (int d = -6; d <= 6; ++d) {
      const Complex by_quadrature = oracle::kick_coefficient_quadrature(
          [k](double theta) { return k * std::sin(theta); }, d);
      CHECK(std::abs(coeffs[static_cast<size_t>(d + 10)] - by_quadrature) < 1e-12);
    }
  }

  SUBCASE("under-resolved profiles are rejected with a resolution report") {
    // Strong kick on a minimal grid: the coefficient tail above order dim is fat.
    const BasisSpec tiny(2, 1.0);
    ModelParams p = generic_params(40.0, 1.0, cosine_profile(40.0, 32));
    CHECK_THROWS_WITH_AS(build_generic_floquet(p, tiny), doctest::Contains("tail"),
                         std::invalid_argument);
  }

  SUBCASE("profile grids must be powers of two") {
    ModelParams p = generic_params(1.0, 1.0, cosine_profile(1.0, 48));
    CHECK_THROWS_AS(build_generic_floquet(p, b), std::invalid_argument);
  }
}

TEST_CASE("propagate") {
  const BasisSpec b(10, 1.0);
  const FloquetMatrix u = build_standard_floquet(standard_params(1.0, 0.8), b);
  const StateVector psi0 = momentum_eigenstate(b, 1);

  SUBCASE("j = 0 returns the input") {
    const StateVector same = propagate(u, psi0, 0);
    CHECK((same.amplitudes - psi0.amplitudes).norm() == 0.0);
  }

  SUBCASE("zero kick evolves phases only") {
    const FloquetMatrix free = build_standard_floquet(standard_params(0.0, 0.8), b);
    const StateVector evolved = propagate(free, psi0, 4);
    for (int i = 0; i < b.dim(); ++i)
      CHECK(std::abs(std::abs(evolved.amplitudes(i)) - std::abs(psi0.amplitudes(i))) < 1e-15);
  }

  SUBCASE("two steps compose") {
    const StateVector two = propagate(u, psi0, 2);
    const StateVector chained = propagate(u, propagate(u, psi0, 1), 1);
    CHECK((two.amplitudes - chained.amplitudes).norm() < 1e-15);
  }

  SUBCASE("negative j is rejected") {
    CHECK_THROWS_AS(propagate(u, psi0, -1), std::invalid_argument);
  }
}

TEST_CASE("split_step_apply agrees with the dense one-kick oracle") {
  const double k = 1.0;
  const BasisSpec b(default_cutoff(k), 1.0);
  const ModelParams p = standard_params(k, 1.0);
  const FloquetMatrix u = build_standard_floquet(p, b);
  const StateVector psi0 = momentum_eigenstate(b, 0);

  const StateVector split = split_step_apply(p, psi0);
  const StateVector dense = propagate(u, psi0, 1);
  CHECK((split.amplitudes - dense.amplitudes).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(split.norm_sq() - 1.0) < 1e-12);
  CHECK_FALSE(split.edge_flagged);
}

TEST_CASE("split_step_apply with zero potential applies free phases only") {
  const BasisSpec b(4, 1.0);
  ModelParams p = standard_params(0.0, 1.3);
  StateVector psi = momentum_eigenstate(b, 2);
  psi.amplitudes(b.index_of(-1)) = Complex(0.6, 0.0);
  psi.amplitudes(b.index_of(2)) = Complex(0.0, 0.8);
  const StateVector out = split_step_apply(p, psi);
  for (int i = 0; i < b.dim(); ++i) {
    const int n = b.n_of(i);
    const Complex expect = psi.amplitudes(i) * std::polar(1.0, -0.5 * n * n * 1.3);
    CHECK(std::abs(out.amplitudes(i) - expect) < 1e-14);
  }
}

TEST_CASE("repeated split steps track the dense propagator") {
  const double k = 1.2;
  const BasisSpec b(default_cutoff(k), 1.0);
  const ModelParams p = standard_params(k, 0.9);
  const FloquetMatrix u = build_standard_floquet(p, b);
  StateVector stepped = momentum_eigenstate(b, 0);
  const int j = 12;
  for (int step = 0; step < j; ++step) stepped = split_step_apply(p, stepped);
  const StateVector dense = propagate(u, momentum_eigenstate(b, 0), j);
  CHECK((stepped.amplitudes - dense.amplitudes).cwiseAbs().maxCoeff() < 1e-8 * j);
}

TEST_CASE("split step flags edge-contaminated inputs") {
  const BasisSpec b(6, 1.0);
  const ModelParams p = standard_params(1.0, 1.0);
  const StateVector edge = momentum_eigenstate(b, 6);
  CHECK(split_step_apply(p, edge).edge_flagged);
  CHECK_FALSE(split_step_apply(p, momentum_eigenstate(b, 0)).edge_flagged);
}

TEST_CASE("split step rejects linear kind") {
  const BasisSpec b(4, 1.0);
  CHECK_THROWS_AS(split_step_apply(linear_params(1.0, 0.7), momentum_eigenstate(b, 0)),
                  std::invalid_argument);
}
