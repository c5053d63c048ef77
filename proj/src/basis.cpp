#include "floquetlab/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace floquetlab {

BasisSpec::BasisSpec(int cutoff_, double hbar_eff_) : cutoff(cutoff_), hbar_eff(hbar_eff_) {
  if (cutoff < 0)
    throw std::invalid_argument("BasisSpec: cutoff must be >= 0, got " + std::to_string(cutoff));
  if (!(hbar_eff > 0.0))
    throw std::invalid_argument("BasisSpec: hbar_eff must be > 0, got " +
                                std::to_string(hbar_eff));
}

int band_margin(double k_kick) {
  if (k_kick < 0.0) throw std::invalid_argument("band_margin: k_kick must be >= 0");
  return static_cast<int>(std::ceil(k_kick + 8.0 * std::sqrt(k_kick)));
}

int default_cutoff(double k_kick) {
  if (k_kick < 0.0) throw std::invalid_argument("default_cutoff: k_kick must be >= 0");
  return static_cast<int>(std::ceil(k_kick + 8.0 * std::sqrt(k_kick) + 20.0));
}

StateVector momentum_eigenstate(const BasisSpec& basis, int n) {
  if (n < -basis.cutoff || n > basis.cutoff)
    throw std::invalid_argument("momentum_eigenstate: n = " + std::to_string(n) +
                                " outside [-" + std::to_string(basis.cutoff) + ", " +
                                std::to_string(basis.cutoff) + "]");
  StateVector s;
  s.basis = basis;
  s.amplitudes = CVector::Zero(basis.dim());
  s.amplitudes(basis.index_of(n)) = Complex(1.0, 0.0);
  return s;
}

StateVector uniform_state(const BasisSpec& basis) {
  // psi(theta) = 1/sqrt(2 pi) on the circle is the n = 0 momentum state.
  return momentum_eigenstate(basis, 0);
}

double p_squared_expectation(const StateVector& state) {
  const double norm = std::sqrt(state.norm_sq());
  if (std::abs(norm - 1.0) > 1e-6)
    throw std::invalid_argument("p_squared_expectation: state norm " + std::to_string(norm) +
                                " deviates from 1 by more than 1e-6");
  const auto& b = state.basis;
  double acc = 0.0;
  for (int i = 0; i < b.dim(); ++i) {
    const double p = b.n_of(i) * b.hbar_eff;
    acc += p * p * std::norm(state.amplitudes(i));
  }
  return acc;
}

double edge_weight(const StateVector& state, int margin) {
  const auto& b = state.basis;
  const int inner = b.cutoff - margin;  // |n| > inner counts as edge
  double w = 0.0;
  for (int i = 0; i < b.dim(); ++i)
    if (std::abs(b.n_of(i)) > inner) w += std::norm(state.amplitudes(i));
  return w;
}

}  // namespace floquetlab
