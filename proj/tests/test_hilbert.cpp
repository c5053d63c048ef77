#include <doctest.h>

#include <cmath>

#include "floquetlab/basis.hpp"

using namespace floquetlab;

TEST_CASE("momentum_eigenstate places a single unit amplitude") {
  const BasisSpec b(2, 1.0);
  const StateVector s0 = momentum_eigenstate(b, 0);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(s0.amplitudes(i) - (i == 2 ? Complex(1, 0) : Complex(0, 0))) == 0.0);

  const StateVector edge = momentum_eigenstate(b, -2);
  CHECK(edge.amplitudes(0) == Complex(1, 0));
  CHECK(edge.amplitudes.tail(4).norm() == 0.0);

  CHECK_THROWS_AS(momentum_eigenstate(b, 3), std::invalid_argument);
  CHECK_THROWS_AS(momentum_eigenstate(b, -3), std::invalid_argument);
}

TEST_CASE("uniform_state is the n=0 momentum state") {
  const BasisSpec b1(1, 1.0);
  const StateVector u1 = uniform_state(b1);
  CHECK(u1.amplitudes(0) == Complex(0, 0));
  CHECK(u1.amplitudes(1) == Complex(1, 0));
  CHECK(u1.amplitudes(2) == Complex(0, 0));

  const BasisSpec b0(0, 1.0);
  CHECK(uniform_state(b0).amplitudes(0) == Complex(1, 0));
  CHECK(uniform_state(BasisSpec(7, 0.5)).norm_sq() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("p_squared_expectation") {
  const BasisSpec b(3, 1.0);
  CHECK(p_squared_expectation(momentum_eigenstate(b, 0)) == 0.0);
  CHECK(p_squared_expectation(momentum_eigenstate(b, 2)) == doctest::Approx(4.0));

  const BasisSpec bh(3, 0.5);
  StateVector sup = momentum_eigenstate(bh, 1);
  sup.amplitudes(bh.index_of(-1)) = Complex(1.0 / std::sqrt(2.0), 0.0);
  sup.amplitudes(bh.index_of(1)) = Complex(1.0 / std::sqrt(2.0), 0.0);
  CHECK(p_squared_expectation(sup) == doctest::Approx(0.25).epsilon(1e-14));

  StateVector bad = momentum_eigenstate(b, 1);
  bad.amplitudes *= 1.1;
  CHECK_THROWS_AS(p_squared_expectation(bad), std::invalid_argument);
}

TEST_CASE("p_squared is exact on eigenstates and phase invariant") {
  const BasisSpec b(5, 0.7);
  for (int n = -5; n <= 5; ++n) {
    const double expect = (n * 0.7) * (n * 0.7);
    CHECK(p_squared_expectation(momentum_eigenstate(b, n)) == expect);
  }
  StateVector s = momentum_eigenstate(b, 3);
  s.amplitudes *= std::polar(1.0, 1.234);
  CHECK(p_squared_expectation(s) == doctest::Approx((3 * 0.7) * (3 * 0.7)).epsilon(1e-14));
}

TEST_CASE("index map is a bijection onto [0, dim)") {
  for (int cutoff : {0, 1, 4, 17}) {
    const BasisSpec b(cutoff, 1.0);
    for (int n = -cutoff; n <= cutoff; ++n) {
      const int i = b.index_of(n);
      CHECK(i >= 0);
      CHECK(i < b.dim());
      CHECK(b.n_of(i) == n);
    }
  }
}

TEST_CASE("basis validation and truncation heuristics") {
  CHECK_THROWS_AS(BasisSpec(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(BasisSpec(3, 0.0), std::invalid_argument);
  CHECK(BasisSpec(4, 1.0).dim() == 9);

  CHECK(default_cutoff(0.0) == 20);
  CHECK(default_cutoff(5.0) == static_cast<int>(std::ceil(5.0 + 8.0 * std::sqrt(5.0) + 20.0)));
  CHECK(band_margin(2.0) == static_cast<int>(std::ceil(2.0 + 8.0 * std::sqrt(2.0))));
  CHECK(band_margin(0.0) == 0);
}

TEST_CASE("edge_weight sums probability near the cutoff") {
  const BasisSpec b(4, 1.0);
  const StateVector s = momentum_eigenstate(b, 4);
  CHECK(edge_weight(s, 1) == doctest::Approx(1.0));
  CHECK(edge_weight(momentum_eigenstate(b, 0), 1) == 0.0);
}
