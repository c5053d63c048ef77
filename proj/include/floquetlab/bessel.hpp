#pragma once

#include <vector>

namespace floquetlab {

// Bessel function of the first kind J_order(x), integer order.
// Supported envelope: |order| <= 1e6, |x| <= 1e4; outside -> std::invalid_argument.
// Absolute accuracy ~1e-13 over the envelope. Negative orders and arguments via
// J_{-k}(x) = (-1)^k J_k(x), J_k(-x) = (-1)^k J_k(x).
double bessel_j(long order, double x);

// J_0(x) .. J_max_order(x) in one backward-recurrence pass (x >= 0).
std::vector<double> bessel_j_array(int max_order, double x);

// Smallest D such that |J_d(x)| < floor for every d > D (D <= hard cap).
int bessel_effective_band(double x, double floor_value = 1e-14);

}  // namespace floquetlab
