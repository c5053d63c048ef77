#pragma once

#include <optional>
#include <vector>

#include "floquetlab/basis.hpp"
#include "floquetlab/types.hpp"

namespace floquetlab {

enum class RotorKind { standard, linear, generic };

// Sign of the free one-period phase on |n>:
// derived: exp(-i n^2 tau_free / 2)   (forced by U0 = exp(-i P^2 T / 2 hbar))
// paper:   exp(+i n^2 tau_free / 2)   (literature-comparison convention)
enum class PhaseSign { derived, paper };

// Sampled V(theta)/hbar on a uniform theta grid (power-of-two length).
struct KickProfile {
  std::vector<double> samples;
};

// Dimensionless model parameters: k_kick = K/hbar, tau_free = hbar*T,
// phi_free = alpha*T.
struct ModelParams {
  RotorKind kind = RotorKind::standard;
  double k_kick = 0.0;
  double tau_free = 0.0;                    // standard / generic
  double phi_free = 0.0;                    // linear
  std::optional<KickProfile> kick_profile;  // generic
  PhaseSign phase_sign = PhaseSign::derived;

  void validate(const BasisSpec& basis) const;
};

struct FloquetMatrix {
  CMatrix entries;  // dim x dim, row n, column m (indices shifted by +cutoff)
  ModelParams params;
  BasisSpec basis;

  int dim() const { return static_cast<int>(entries.rows()); }
  Complex entry(int n, int m) const { return entries(basis.index_of(n), basis.index_of(m)); }
};

// One-period operator U_F = U_kick * U_free for V = k_kick * hbar * cos(theta):
// entry(n, m) = exp(-i m^2 tau/2) * (-i)^{m-n} * J_{m-n}(k_kick).
// Kick entries below 1e-14 are stored as exact zeros (band floor).
FloquetMatrix build_standard_floquet(const ModelParams& params, const BasisSpec& basis);

// Linear rotor (H0 = alpha P): entry(n, m) = exp(-i m phi_free) * i^{m-n} * J_{m-n}(k_kick).
FloquetMatrix build_linear_floquet(const ModelParams& params, const BasisSpec& basis);

// Generic kick: Fourier coefficients of exp(-i V(theta)/hbar) from the sampled
// profile via FFT, times the free diagonal. Rejects under-resolved profiles
// whose coefficient tail above order dim exceeds 1e-12.
FloquetMatrix build_generic_floquet(const ModelParams& params, const BasisSpec& basis);

FloquetMatrix build_floquet(const ModelParams& params, const BasisSpec& basis);

// U^j * state by j successive matrix-vector products; no renormalization.
StateVector propagate(const FloquetMatrix& op, const StateVector& state, int j);

// One period by the split-operator route: free phases in momentum space, FFT to
// a theta grid (>= 4*dim, power of two), kick phases, FFT back, truncate.
// Flags (does not reject) input states with > 1e-8 weight within band_margin
// of the cutoff.
StateVector split_step_apply(const ModelParams& params, const StateVector& state);

// Kick-operator Fourier coefficients c_d of exp(-i V(theta)/hbar), d = -max_order..max_order,
// from a uniform sample grid (power-of-two length). Returned indexed by d + max_order.
std::vector<Complex> kick_fourier_coefficients(const std::vector<double>& profile_samples,
                                               int max_order);

// Samples of k_kick*cos(theta) / k_kick*sin(theta) on a uniform grid.
KickProfile cosine_profile(double k_kick, int n_samples);
KickProfile sine_profile(double k_kick, int n_samples);

}  // namespace floquetlab
