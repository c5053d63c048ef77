#include "floquetlab/floquet_op.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

#include "floquetlab/bessel.hpp"
#include "floquetlab/threading.hpp"

namespace floquetlab {

namespace {

// Entries below this magnitude are stored as exact zeros; keeps the matrices
// visibly banded without perturbing any 1e-10 route-equivalence budget.
constexpr double kBandFloor = 1e-14;

bool is_power_of_two(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_power_of_two(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double free_phase_sign(PhaseSign s) { return s == PhaseSign::derived ? -1.0 : 1.0; }

// exp(sign * i * m^2 tau / 2)
Complex quadratic_phase(int m, double tau, double sign) {
  const double arg = sign * 0.5 * static_cast<double>(m) * static_cast<double>(m) * tau;
  return std::polar(1.0, arg);
}

}  // namespace

void ModelParams::validate(const BasisSpec& basis) const {
  if (k_kick < 0.0) throw std::invalid_argument("ModelParams: k_kick must be >= 0");
  switch (kind) {
    case RotorKind::standard:
    case RotorKind::generic:
      if (!std::isfinite(tau_free))
        throw std::invalid_argument("ModelParams: tau_free must be set and finite");
      break;
    case RotorKind::linear:
      if (!std::isfinite(phi_free))
        throw std::invalid_argument("ModelParams: phi_free must be set and finite");
      break;
  }
  if (kind == RotorKind::generic) {
    if (!kick_profile || kick_profile->samples.empty())
      throw std::invalid_argument("ModelParams: generic kind requires a kick_profile");
    const size_t n = kick_profile->samples.size();
    if (!is_power_of_two(n) || n < 4 * static_cast<size_t>(basis.dim()))
      throw std::invalid_argument(
          "ModelParams: kick_profile needs a power-of-two sample count >= 4*dim, got " +
          std::to_string(n) + " for dim " + std::to_string(basis.dim()));
  }
}

FloquetMatrix build_standard_floquet(const ModelParams& params, const BasisSpec& basis) {
  if (params.kind != RotorKind::standard)
    throw std::invalid_argument("build_standard_floquet: kind must be standard");
  params.validate(basis);

  const int dim = basis.dim();
  const int max_d = 2 * basis.cutoff;
  const auto jl = bessel_j_array(max_d, params.k_kick);
  const double sign = free_phase_sign(params.phase_sign);

  FloquetMatrix out;
  out.params = params;
  out.basis = basis;
  out.entries.resize(dim, dim);
  parallel_for(static_cast<size_t>(dim), [&](size_t col) {
    const int m = basis.n_of(static_cast<int>(col));
    const Complex free = quadratic_phase(m, params.tau_free, sign);
    for (int row = 0; row < dim; ++row) {
      const int n = basis.n_of(row);
      const int d = m - n;
      double j = jl[static_cast<size_t>(std::abs(d))];
      if (d < 0 && (d & 1)) j = -j;
      out.entries(row, static_cast<Eigen::Index>(col)) =
          std::abs(j) < kBandFloor ? Complex(0.0, 0.0) : free * ipow(-d) * j;
    }
  });
  return out;
}

FloquetMatrix build_linear_floquet(const ModelParams& params, const BasisSpec& basis) {
  if (params.kind != RotorKind::linear)
    throw std::invalid_argument("build_linear_floquet: kind must be linear");
  params.validate(basis);

  const int dim = basis.dim();
  const auto jl = bessel_j_array(2 * basis.cutoff, params.k_kick);

  FloquetMatrix out;
  out.params = params;
  out.basis = basis;
  out.entries.resize(dim, dim);
  parallel_for(static_cast<size_t>(dim), [&](size_t col) {
    const int m = basis.n_of(static_cast<int>(col));
    const Complex free = std::polar(1.0, -static_cast<double>(m) * params.phi_free);
    for (int row = 0; row < dim; ++row) {
      const int n = basis.n_of(row);
      const int d = m - n;
      double j = jl[static_cast<size_t>(std::abs(d))];
      if (d < 0 && (d & 1)) j = -j;
      out.entries(row, static_cast<Eigen::Index>(col)) =
          std::abs(j) < kBandFloor ? Complex(0.0, 0.0) : free * ipow(d) * j;
    }
  });
  return out;
}

std::vector<Complex> kick_fourier_coefficients(const std::vector<double>& profile_samples,
                                               int max_order) {
  const size_t g = profile_samples.size();
  if (!is_power_of_two(g) || g < 4)
    throw std::invalid_argument("kick_fourier_coefficients: sample count must be a power of two >= 4");
  if (static_cast<size_t>(max_order) > g / 2)
    throw std::invalid_argument("kick_fourier_coefficients: max_order exceeds Nyquist order");

  std::vector<Complex> w(g);
  for (size_t t = 0; t < g; ++t) w[t] = std::polar(1.0, -profile_samples[t]);
  std::vector<Complex> spectrum(g);
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, w);

  std::vector<Complex> coeffs(static_cast<size_t>(2 * max_order) + 1);
  const double inv_g = 1.0 / static_cast<double>(g);
  for (int d = -max_order; d <= max_order; ++d) {
    const size_t bin = static_cast<size_t>((d % static_cast<int>(g) + static_cast<int>(g)) %
                                           static_cast<int>(g));
    coeffs[static_cast<size_t>(d + max_order)] = spectrum[bin] * inv_g;
  }
  return coeffs;
}

FloquetMatrix build_generic_floquet(const ModelParams& params, const BasisSpec& basis) {
  if (params.kind != RotorKind::generic)
    throw std::invalid_argument("build_generic_floquet: kind must be generic");
  params.validate(basis);

  const int dim = basis.dim();
  const auto& samples = params.kick_profile->samples;
  const int g = static_cast<int>(samples.size());
  const int nyquist = g / 2;

  const auto coeffs = kick_fourier_coefficients(samples, nyquist);
  const auto c = [&](int d) { return coeffs[static_cast<size_t>(d + nyquist)]; };

  // Aliasing guard: if exp(-i V) still carries weight in the top dim orders
  // below Nyquist, the grid under-resolves it and the matrix band (orders up
  // to dim) is contaminated by wrap-around.
  double tail = 0.0;
  int tail_at = 0;
  for (int d = std::max(dim + 1, nyquist - dim); d <= nyquist; ++d) {
    const double a = std::max(std::abs(c(d)), std::abs(c(-d)));
    if (a > tail) {
      tail = a;
      tail_at = d;
    }
  }
  if (tail > 1e-12)
    throw std::invalid_argument(
        "build_generic_floquet: kick-factor Fourier tail " + std::to_string(tail) +
        " at order " + std::to_string(tail_at) + " exceeds 1e-12; increase the sample count (" +
        std::to_string(g) + ") or smooth the profile");

  const double sign = free_phase_sign(params.phase_sign);
  FloquetMatrix out;
  out.params = params;
  out.basis = basis;
  out.entries.resize(dim, dim);
  parallel_for(static_cast<size_t>(dim), [&](size_t col) {
    const int m = basis.n_of(static_cast<int>(col));
    const Complex free = quadratic_phase(m, params.tau_free, sign);
    for (int row = 0; row < dim; ++row) {
      const int n = basis.n_of(row);
      const Complex kc = c(n - m);
      out.entries(row, static_cast<Eigen::Index>(col)) =
          std::abs(kc) < kBandFloor ? Complex(0.0, 0.0) : kc * free;
    }
  });
  return out;
}

FloquetMatrix build_floquet(const ModelParams& params, const BasisSpec& basis) {
  switch (params.kind) {
    case RotorKind::standard: return build_standard_floquet(params, basis);
    case RotorKind::linear: return build_linear_floquet(params, basis);
    case RotorKind::generic: return build_generic_floquet(params, basis);
  }
  throw std::logic_error("build_floquet: unreachable");
}

StateVector propagate(const FloquetMatrix& op, const StateVector& state, int j) {
  if (j < 0) throw std::invalid_argument("propagate: j must be >= 0");
  if (!(state.basis == op.basis))
    throw std::invalid_argument("propagate: state and operator bases differ");
  StateVector out = state;
  for (int step = 0; step < j; ++step) out.amplitudes = op.entries * out.amplitudes;
  return out;
}

KickProfile cosine_profile(double k_kick, int n_samples) {
  KickProfile p;
  p.samples.resize(static_cast<size_t>(n_samples));
  for (int t = 0; t < n_samples; ++t)
    p.samples[static_cast<size_t>(t)] = k_kick * std::cos(kTwoPi * t / n_samples);
  return p;
}

KickProfile sine_profile(double k_kick, int n_samples) {
  KickProfile p;
  p.samples.resize(static_cast<size_t>(n_samples));
  for (int t = 0; t < n_samples; ++t)
    p.samples[static_cast<size_t>(t)] = k_kick * std::sin(kTwoPi * t / n_samples);
  return p;
}

StateVector split_step_apply(const ModelParams& params, const StateVector& state) {
  if (params.kind == RotorKind::linear)
    throw std::invalid_argument("split_step_apply: supported for standard/generic kinds only");
  params.validate(state.basis);

  const BasisSpec& basis = state.basis;
  const int dim = basis.dim();

  std::vector<double> profile;
  if (params.kind == RotorKind::generic) {
    profile = params.kick_profile->samples;
  } else {
    const size_t g = next_power_of_two(static_cast<size_t>(4 * dim));
    profile = cosine_profile(params.k_kick, static_cast<int>(g)).samples;
  }
  const size_t g = profile.size();

  const double k_eff = params.kind == RotorKind::standard
                           ? params.k_kick
                           : [&] {
                               double m = 0.0;
                               for (double v : profile) m = std::max(m, std::abs(v));
                               return m;
                             }();

  StateVector out;
  out.basis = basis;
  out.edge_flagged = state.edge_flagged ||
                     edge_weight(state, std::min(band_margin(k_eff), basis.cutoff)) > 1e-8;

  // Free half: diagonal quadratic phases in momentum space.
  const double sign = free_phase_sign(params.phase_sign);
  std::vector<Complex> spectrum(g, Complex(0.0, 0.0));
  for (int i = 0; i < dim; ++i) {
    const int n = basis.n_of(i);
    const size_t bin = static_cast<size_t>((n % static_cast<int>(g) + static_cast<int>(g)) %
                                           static_cast<int>(g));
    spectrum[bin] = state.amplitudes(i) * quadratic_phase(n, params.tau_free, sign);
  }

  // Kick: multiply exp(-i V(theta)) on the theta grid.
  Eigen::FFT<double> fft;
  std::vector<Complex> grid(g);
  fft.inv(grid, spectrum);  // grid_t = (1/G) sum_k s_k e^{+i k theta_t}
  for (size_t t = 0; t < g; ++t) grid[t] *= std::polar(1.0, -profile[t]);
  fft.fwd(spectrum, grid);  // recovers coefficients with the 1/G already applied

  out.amplitudes.resize(dim);
  for (int i = 0; i < dim; ++i) {
    const int n = basis.n_of(i);
    const size_t bin = static_cast<size_t>((n % static_cast<int>(g) + static_cast<int>(g)) %
                                           static_cast<int>(g));
    out.amplitudes(i) = spectrum[bin];
  }
  return out;
}

}  // namespace floquetlab
