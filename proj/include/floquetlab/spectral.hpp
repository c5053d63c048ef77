#pragma once

#include <map>
#include <vector>

#include "floquetlab/floquet_op.hpp"

namespace floquetlab {

// Eigensystem of the unitary closure of a truncated Floquet operator.
// Momentum truncation leaves the dense matrix non-unitary in a band around the
// edge columns; diagonalize() repairs that minimally (polar decomposition) and
// reports how large the repair was. Interior physics is untouched.
struct FloquetEigensystem {
  CVector eigenvalues;     // mu_n on the unit circle, sorted by eigenphase
  RVector quasi_energies;  // eps_n = -arg(mu_n) folded to [0, 2pi)
  CMatrix modes;           // eigenvector columns
  double residual = 0.0;        // max |U_hat V - V Lambda|
  double orthonormality = 0.0;  // max |V^dag V - I|
  double edge_deviation = 0.0;  // max | column norm(U) - 1 | of the input
  double unitarity_gap = 0.0;   // max |U - U_hat| entry (edge repair size)
  BasisSpec basis;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
};

FloquetEigensystem diagonalize(const FloquetMatrix& op);

// The unitary factor of the polar decomposition U (U^dag U)^{-1/2}: the
// operator diagonalize() actually decomposes. Equal to U away from the
// truncation edges.
CMatrix unitary_closure(const CMatrix& u);

// Dimensionless quasi-energies eps_n = -arg(mu_n) in [0, 2pi).
RVector quasi_energies(const CVector& eigenvalues);
RVector quasi_energies(const FloquetEigensystem& es);

// Cayley-transformed eigenproblem data: f_k are the Fourier coefficients of
// tan(V(theta)/2hbar); the free part enters through tan(m^2 tau/4 - lambda/2).
struct ToeplitzSystem {
  std::map<int, Complex> f_coeffs;
  double tau_free = 0.0;
  int lambda_grid = 10000;
};

// f_k for |k| <= max_order from a sampled V(theta)/hbar profile (power-of-two
// grid). Rejects profiles that come within 1e-3 of a tan pole.
ToeplitzSystem cayley_coefficients(const std::vector<double>& profile_samples, int max_order,
                                   double tau_free, int lambda_grid = 10000);

struct ScanResult {
  std::vector<double> lambdas;  // singular points of M(lambda) in [0, 2pi), sorted
  // Grid minima of the smallest |eigenvalue| that did not bracket a sign change
  // (possible missed or even-multiplicity roots), as (lambda, min|eig|) pairs.
  std::vector<std::pair<double, double>> unresolved_minima;
  bool complete = false;  // found at least dim roots
};

// Locates lambda where F + diag(tan(m^2 tau/4 - lambda/2)) is singular.
// The root set reproduces the eigenphases of the matching Floquet operator:
// exactly those of cayley_floquet(sys, basis), and the interior-localized
// eigenphases of the profile-built operator (edge modes feel the different
// truncation boundary).
ScanResult hermitian_scan(const ToeplitzSystem& sys, const BasisSpec& basis);

// The truncation-matched unitary of the Cayley-transformed eigenproblem:
// U = (1 - iF)(1 + iF)^{-1} diag(e^{-i m^2 tau/2}) with F the Toeplitz section
// of the f_k.
FloquetMatrix cayley_floquet(const ToeplitzSystem& sys, const BasisSpec& basis);

enum class SzegoFunction { identity, square, abs_value, cosine };

struct SzegoAverage {
  double finite_avg = 0.0;  // (1/n) sum F(lambda_{k,n}) over the n x n section
  double limit = 0.0;       // (1/2pi) integral F(f(theta)) dtheta
};

SzegoAverage szego_average(const std::map<int, Complex>& symbol_coeffs, SzegoFunction f, int n);

double apply_szego_function(SzegoFunction f, double x);

}  // namespace floquetlab
