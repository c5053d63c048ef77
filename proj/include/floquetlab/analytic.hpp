#pragma once

#include "floquetlab/floquet_op.hpp"

namespace floquetlab {

// Planar Euclidean-group element g = T_a R_theta in canonical polar form:
// trans_mag >= 0, angles in [0, 2pi), trans_dir = 0 when trans_mag = 0.
struct E2Element {
  double rot = 0.0;
  double trans_mag = 0.0;
  double trans_dir = 0.0;
};

E2Element e2_canonical(double rot, double trans_mag, double trans_dir);
E2Element e2_identity();

// Group law (R2, a2)(R1, a1) = (R2 R1, R2 a1 + a2).
E2Element e2_compose(const E2Element& g2, const E2Element& g1);

// g^j. Closed form A_j = a sin(j theta/2)/sin(theta/2), Phi_j = phi + (j-1) theta/2
// (direction flipped by pi when the sine ratio is negative); falls back to
// repeated composition at resonant rotation angles.
E2Element e2_power(const E2Element& g, int j);

// Unitary irrep matrix on the truncated basis (lambda = 1):
// U(g)_{nm} = e^{-i m rot} e^{i (m-n) trans_dir} J_{m-n}(trans_mag).
CMatrix e2_representation(const E2Element& g, const BasisSpec& basis);

// The linear rotor's U_F is the irrep of {rot = phi_free, a = k_kick, phi = pi/2}.
E2Element linear_rotor_element(const ModelParams& params);

// U_F^j in closed form via the group power; resonant phi_free (sin(phi/2) = 0)
// delegates to the dense matrix power.
FloquetMatrix linear_propagator_closed_form(const ModelParams& params, int j,
                                            const BasisSpec& basis);

// L_j = J_0^2(|delta_k| sin(j theta0) / sin(theta0)), theta0 = phi_free/2.
// Rejects resonant theta0 (use the numeric route there).
double linear_echo_closed_form(double k_kick_delta, double phi_free, int j);

// Closed-form Wigner value of the linear rotor started in |n_init>, after j
// kicks, at (theta, p_l).
double linear_wigner_closed_form(int n_init, const ModelParams& params, int j, double theta,
                                 int p_l);

}  // namespace floquetlab
