#include "floquetlab/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace floquetlab {

namespace {

constexpr long kMaxOrder = 1000000;
constexpr double kMaxArg = 1.0e4;

// Power series J_k(x) = sum_s (-1)^s (x/2)^{k+2s} / (s! (k+s)!), k >= 0.
// Accurate in double for |x| up to a few; terms are monotone-decaying there.
double series_jk(int k, double x) {
  const double h = 0.5 * x;
  double term = 1.0;
  for (int s = 1; s <= k; ++s) term *= h / static_cast<double>(s);
  if (term == 0.0) return 0.0;
  double sum = term;
  const double h2 = -h * h;
  for (int s = 1; s < 200; ++s) {
    term *= h2 / (static_cast<double>(s) * static_cast<double>(k + s));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

// Miller backward recurrence for the whole ladder J_0..J_max, x > 0.
// Normalized by sum J_k^2 = 1; global sign fixed by J_0 + 2 sum J_{2s} = 1.
std::vector<double> miller_ladder(int max_order, double x) {
  const int top = std::max(max_order, static_cast<int>(std::ceil(x)));
  const int start =
      top + 2 * static_cast<int>(std::ceil(std::sqrt(static_cast<double>(top) + 1.0))) + 42;

  std::vector<double> j(static_cast<size_t>(max_order) + 1, 0.0);
  double jp = 0.0;  // plays J_{m+2} at loop entry
  double jc = 1.0;  // plays J_{m+1} at loop entry (arbitrary seed)
  double sum_sq = 0.0;      // running J_0^2 + 2 sum_{k>=1} J_k^2
  double sum_even = 0.0;    // running J_0 + 2 sum J_{2s} (fixes the global sign)
  for (int m = start; m >= 0; --m) {
    const double jm = (2.0 * (m + 1) / x) * jc - jp;  // J_m from J_{m+1}, J_{m+2}
    jp = jc;
    jc = jm;
    if (m <= max_order) j[static_cast<size_t>(m)] = jc;
    if (m > 0) {
      sum_sq += 2.0 * jc * jc;
      if (m % 2 == 0) sum_even += 2.0 * jc;
    } else {
      sum_sq += jc * jc;
      sum_even += jc;
    }
    // Rescale before jc^2 can overflow; the recurrence grows superexponentially.
    if (std::abs(jc) > 1e140) {
      const double s = 1e-140;
      jc *= s;
      jp *= s;
      sum_sq *= s * s;
      sum_even *= s;
      for (double& v : j) v *= s;
    }
  }
  const double scale = (sum_even < 0.0 ? -1.0 : 1.0) / std::sqrt(sum_sq);
  for (double& v : j) v *= scale;
  return j;
}

}  // namespace

std::vector<double> bessel_j_array(int max_order, double x) {
  if (max_order < 0 || max_order > kMaxOrder)
    throw std::invalid_argument("bessel_j_array: order out of range [0, 1e6]: " +
                                std::to_string(max_order));
  if (!(x >= 0.0) || x > kMaxArg)
    throw std::invalid_argument("bessel_j_array: argument out of range [0, 1e4]: " +
                                std::to_string(x));
  std::vector<double> j(static_cast<size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  if (x < 2.0) {
    // Series termwise; underflowed high orders stay exactly zero.
    for (int k = 0; k <= max_order; ++k) j[static_cast<size_t>(k)] = series_jk(k, x);
    return j;
  }
  return miller_ladder(max_order, x);
}

double bessel_j(long order, double x) {
  if (order < -kMaxOrder || order > kMaxOrder)
    throw std::invalid_argument("bessel_j: order out of range [-1e6, 1e6]: " +
                                std::to_string(order));
  if (!(std::abs(x) <= kMaxArg))
    throw std::invalid_argument("bessel_j: argument out of range [-1e4, 1e4]: " +
                                std::to_string(x));
  long k = order;
  double sign = 1.0;
  if (k < 0) {
    k = -k;
    if (k % 2 != 0) sign = -sign;
  }
  double ax = x;
  if (ax < 0.0) {
    ax = -ax;
    if (k % 2 != 0) sign = -sign;
  }
  if (ax == 0.0) return k == 0 ? 1.0 : 0.0;
  // Far beyond the turning point the value underflows any double tolerance.
  if (static_cast<double>(k) > ax + 9.0 * std::sqrt(ax) + 700.0) return 0.0;
  if (ax < 2.0) return sign * series_jk(static_cast<int>(k), ax);
  const auto ladder = miller_ladder(static_cast<int>(k), ax);
  return sign * ladder[static_cast<size_t>(k)];
}

int bessel_effective_band(double x, double floor_value) {
  const double ax = std::abs(x);
  const int cap = static_cast<int>(std::ceil(ax + 9.0 * std::sqrt(ax))) + 60;
  const auto ladder = bessel_j_array(cap, ax);
  int band = 0;
  for (int d = 0; d <= cap; ++d)
    if (std::abs(ladder[static_cast<size_t>(d)]) >= floor_value) band = d;
  return band;
}

}  // namespace floquetlab
