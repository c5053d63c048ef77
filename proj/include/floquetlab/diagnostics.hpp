#pragma once

#include "floquetlab/floquet_op.hpp"
#include "floquetlab/series.hpp"
#include "floquetlab/spectral.hpp"

namespace floquetlab {

// Single-kick Loschmidt echo for the standard rotor started in |n_init>:
// L = | sum_d J_d(k') J_d(k) |^2 with the sum truncated at the Bessel band.
double echo_single_kick(int n_init, double k, double k_prime, const BasisSpec& basis);

// L(j) = |<psi0| U'^dag^j U^j |psi0>|^2 by two dense propagations,
// U' built with k_kick + delta_k. Truncates the series (with a flag) once
// either propagated state carries > 1e-6 weight near the cutoff.
DiagnosticSeries loschmidt_echo_direct(const ModelParams& params, const BasisSpec& basis,
                                       double delta_k, const StateVector& psi0, int j_max);

// Same quantity from the two eigensystems: overlap coefficients are formed
// once, eigenvalue powers per kick.
DiagnosticSeries loschmidt_echo_floquet(const FloquetEigensystem& es_k,
                                        const FloquetEigensystem& es_kp,
                                        const StateVector& psi0, int j_max);

// Discrete-momentum Wigner function
//   W(theta, p) = (1/pi) sum_m Psi(p+m) Psi*(p-m) e^{2 i m theta}
// on a uniform theta grid (n_theta >= 2*dim, even). Fails if the imaginary
// residue of the m-sum exceeds 1e-10 (indexing bug trap).
WignerGrid wigner(const StateVector& state, int n_theta);

// Wigner grid of the state reconstructed from Floquet eigendata after j kicks,
// Psi(m, j) = sum_n c_n mu_n^j modes(m, n).
WignerGrid wigner_from_eigensystem(const FloquetEigensystem& es, const CVector& coeffs, int j,
                                   int n_theta);

// A_j = sum_{m,n} |<mu_m|P0|mu_n>|^2 (mu_n^* mu_m)^j  (real; trace over the
// truncated basis, so the j=0 value Tr P0^2 is cutoff-dependent).
double spectral_autocorr(const FloquetEigensystem& es, int j);
DiagnosticSeries spectral_autocorr_series(const FloquetEigensystem& es, int j_max);

// S(j) = |sum_n e^{-i eps_n j}|^2.
double spectral_form_factor(const FloquetEigensystem& es, int j);
DiagnosticSeries spectral_form_factor_series(const FloquetEigensystem& es, int j_max);

// <m|P_j|n> with P_j = U^{dag j} P0 U^j evaluated in the Floquet eigenbasis.
Complex heisenberg_p_element(const FloquetEigensystem& es, int m, int n, int j);

// C_j = || [P_j, P0] |psi0> ||^2. When psi0 is a momentum eigenstate the value
// is cross-checked against hbar^2 sum_m (n-m)^2 |<m|P_j|n>|^2; disagreement
// beyond 1e-8 throws (phase-convention bug trap).
double otoc(const FloquetEigensystem& es, const StateVector& psi0, int j);
DiagnosticSeries otoc_series(const FloquetEigensystem& es, const StateVector& psi0, int j_max);

// The eigenstate-only alternative OTOC form, exposed for cross-checks.
double otoc_eigenstate_alt(const FloquetEigensystem& es, int n, int j);

// <P^2>(j) under repeated split-operator kicks; truncates with a flag on edge
// contamination (> 1e-8 weight within band_margin of the cutoff).
DiagnosticSeries energy_growth(const ModelParams& params, const StateVector& psi0, int j_max);

}  // namespace floquetlab
