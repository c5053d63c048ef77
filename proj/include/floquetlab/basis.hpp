#pragma once

#include "floquetlab/types.hpp"

namespace floquetlab {

// Truncated momentum basis |n>, n in [-cutoff, cutoff], P|n> = n*hbar_eff |n>.
struct BasisSpec {
  int cutoff = 0;          // N >= 0
  double hbar_eff = 1.0;   // dimensionless effective Planck parameter, > 0

  BasisSpec() = default;
  BasisSpec(int cutoff_, double hbar_eff_);

  int dim() const { return 2 * cutoff + 1; }
  int index_of(int n) const { return n + cutoff; }   // quantum number -> storage index
  int n_of(int index) const { return index - cutoff; }

  bool operator==(const BasisSpec& o) const {
    return cutoff == o.cutoff && hbar_eff == o.hbar_eff;
  }
};

struct StateVector {
  CVector amplitudes;        // index i <-> n = i - cutoff
  BasisSpec basis;
  bool edge_flagged = false; // set when an evolution step saw edge contamination

  double norm_sq() const { return amplitudes.squaredNorm(); }
};

// Bessel-band half-width used for interior/edge classification.
int band_margin(double k_kick);

// Default truncation heuristic: N >= ceil(k + 8 sqrt(k) + 20).
int default_cutoff(double k_kick);

StateVector momentum_eigenstate(const BasisSpec& basis, int n);
StateVector uniform_state(const BasisSpec& basis);

// <P^2> = sum_n (n hbar)^2 |a_n|^2; requires |norm - 1| <= 1e-6.
double p_squared_expectation(const StateVector& state);

// Probability weight within `margin` levels of the cutoff.
double edge_weight(const StateVector& state, int margin);

}  // namespace floquetlab
