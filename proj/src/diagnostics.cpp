#include "floquetlab/diagnostics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "floquetlab/bessel.hpp"

namespace floquetlab {

namespace {

Complex unit_power(Complex mu, int j) {
  return std::polar(1.0, std::arg(mu) * static_cast<double>(j));
}

CVector unit_powers(const CVector& mu, int j) {
  CVector z(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) z(i) = unit_power(mu(i), j);
  return z;
}

RVector momentum_diagonal(const BasisSpec& basis) {
  RVector p(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) p(i) = basis.n_of(i) * basis.hbar_eff;
  return p;
}

// P0 in the Floquet eigenbasis; the one dim^3 product every eigensystem-route
// diagnostic shares.
CMatrix p0_in_floquet_basis(const FloquetEigensystem& es) {
  const RVector p = momentum_diagonal(es.basis);
  return es.modes.adjoint() * p.asDiagonal() * es.modes;
}

void require_normalized(const StateVector& psi, const char* who) {
  if (std::abs(std::sqrt(psi.norm_sq()) - 1.0) > 1e-6)
    throw std::invalid_argument(std::string(who) + ": initial state is not normalized");
}

std::string state_label(const StateVector& psi) {
  int nonzero = 0;
  int label = 0;
  for (int i = 0; i < psi.basis.dim(); ++i)
    if (std::abs(psi.amplitudes(i)) > 1e-12) {
      ++nonzero;
      label = psi.basis.n_of(i);
    }
  if (nonzero == 1) return "|" + std::to_string(label) + ">";
  return "custom";
}

// Momentum label when psi is (numerically) a single basis state.
std::optional<int> eigenstate_label(const StateVector& psi) {
  int nonzero = 0;
  int label = 0;
  for (int i = 0; i < psi.basis.dim(); ++i)
    if (std::abs(psi.amplitudes(i)) > 1e-12) {
      ++nonzero;
      label = psi.basis.n_of(i);
    }
  if (nonzero == 1) return label;
  return std::nullopt;
}

WignerGrid wigner_of_wavefunction(const CVector& psi, const BasisSpec& basis, int n_theta,
                                  int time_index) {
  const int dim = basis.dim();
  if (n_theta < 2 * dim || n_theta % 2 != 0)
    throw std::invalid_argument("wigner: n_theta must be even and >= 2*dim");

  WignerGrid grid;
  grid.time_index = time_index;
  grid.theta.resize(n_theta);
  for (int t = 0; t < n_theta; ++t) grid.theta(t) = kTwoPi * t / n_theta;
  grid.p_labels.resize(static_cast<size_t>(dim));
  for (int l = 0; l < dim; ++l) grid.p_labels[static_cast<size_t>(l)] = basis.n_of(l);
  grid.values.resize(n_theta, dim);

  constexpr double kInvPi = 0.31830988618379067154;
  double max_imag = 0.0;
  for (int l = 0; l < dim; ++l) {
    const int p = basis.n_of(l);
    const int mmax = basis.cutoff - std::abs(p);
    for (int t = 0; t < n_theta; ++t) {
      Complex acc(0.0, 0.0);
      for (int m = -mmax; m <= mmax; ++m) {
        const Complex term =
            psi(basis.index_of(p + m)) * std::conj(psi(basis.index_of(p - m)));
        acc += term * std::polar(1.0, 2.0 * m * grid.theta(t));
      }
      max_imag = std::max(max_imag, std::abs(acc.imag()));
      grid.values(t, l) = kInvPi * acc.real();
    }
  }
  grid.max_imag_residue = max_imag;
  if (max_imag > 1e-10) {
    std::ostringstream msg;
    msg << "wigner: imaginary residue " << max_imag << " exceeds 1e-10";
    throw std::runtime_error(msg.str());
  }
  return grid;
}

}  // namespace

double echo_single_kick(int n_init, double k, double k_prime, const BasisSpec& basis) {
  if (std::abs(n_init) > basis.cutoff)
    throw std::invalid_argument("echo_single_kick: |n_init| exceeds cutoff");
  if (k < 0.0 || k_prime < 0.0)
    throw std::invalid_argument("echo_single_kick: kick strengths must be >= 0");
  const int band =
      std::max(bessel_effective_band(k, 1e-18), bessel_effective_band(k_prime, 1e-18));
  const auto ja = bessel_j_array(band, k);
  const auto jb = bessel_j_array(band, k_prime);
  // d = n_init - m'; J_{-d} J'_{-d} = J_d J'_d, so fold the two sides.
  double sum = ja[0] * jb[0];
  for (int d = 1; d <= band; ++d) sum += 2.0 * ja[static_cast<size_t>(d)] * jb[static_cast<size_t>(d)];
  return sum * sum;
}

DiagnosticSeries loschmidt_echo_direct(const ModelParams& params, const BasisSpec& basis,
                                       double delta_k, const StateVector& psi0, int j_max) {
  if (params.kind == RotorKind::generic)
    throw std::invalid_argument(
        "loschmidt_echo_direct: kick perturbation is defined for standard/linear kinds");
  require_normalized(psi0, "loschmidt_echo_direct");
  if (!(psi0.basis == basis))
    throw std::invalid_argument("loschmidt_echo_direct: state/basis mismatch");

  ModelParams perturbed = params;
  perturbed.k_kick += delta_k;
  if (perturbed.k_kick < 0.0)
    throw std::invalid_argument("loschmidt_echo_direct: k_kick + delta_k must stay >= 0");

  const FloquetMatrix u = build_floquet(params, basis);
  const FloquetMatrix up = build_floquet(perturbed, basis);
  const int margin =
      std::min(band_margin(std::max(params.k_kick, perturbed.k_kick)), basis.cutoff);

  DiagnosticSeries series;
  series.kind = SeriesKind::echo;
  series.meta.method = MethodTag::direct;
  series.meta.dim = basis.dim();
  series.meta.initial_state = state_label(psi0);

  CVector a = psi0.amplitudes;
  CVector b = psi0.amplitudes;
  series.times.push_back(0);
  series.values.push_back(Complex(1.0, 0.0));
  for (int j = 1; j <= j_max; ++j) {
    a = u.entries * a;
    b = up.entries * b;
    double edge = 0.0;
    for (int i = 0; i < basis.dim(); ++i)
      if (std::abs(basis.n_of(i)) > basis.cutoff - margin)
        edge += std::norm(a(i)) + std::norm(b(i));
    if (edge > 1e-6) {
      series.meta.truncated = true;
      series.meta.truncated_at = j;
      break;
    }
    const Complex overlap = b.dot(a);  // conj(b)^T a
    series.times.push_back(j);
    series.values.push_back(Complex(std::norm(overlap), 0.0));
  }
  return series;
}

DiagnosticSeries loschmidt_echo_floquet(const FloquetEigensystem& es_k,
                                        const FloquetEigensystem& es_kp,
                                        const StateVector& psi0, int j_max) {
  if (!(es_k.basis == es_kp.basis))
    throw std::invalid_argument("loschmidt_echo_floquet: eigensystems on different bases");
  if (!(psi0.basis == es_k.basis))
    throw std::invalid_argument("loschmidt_echo_floquet: state/basis mismatch");
  require_normalized(psi0, "loschmidt_echo_floquet");

  const CVector a = es_k.modes.adjoint() * psi0.amplitudes;    // <mu_m(K)|psi0>
  const CVector b = es_kp.modes.adjoint() * psi0.amplitudes;   // <mu_m'(K')|psi0>
  const CMatrix overlap = es_kp.modes.adjoint() * es_k.modes;  // <mu_m'(K')|mu_m(K)>
  CMatrix kernel = overlap;
  for (Eigen::Index r = 0; r < kernel.rows(); ++r)
    for (Eigen::Index c = 0; c < kernel.cols(); ++c)
      kernel(r, c) *= std::conj(b(r)) * a(c);

  DiagnosticSeries series;
  series.kind = SeriesKind::echo;
  series.meta.method = MethodTag::eigensystem;
  series.meta.dim = es_k.dim();
  series.meta.initial_state = state_label(psi0);
  for (int j = 0; j <= j_max; ++j) {
    const CVector z = unit_powers(es_k.eigenvalues, j);
    const CVector w = unit_powers(es_kp.eigenvalues, j);
    const Complex e = (w.conjugate().transpose() * (kernel * z))(0);
    series.times.push_back(j);
    series.values.push_back(Complex(std::norm(e), 0.0));
  }
  return series;
}

WignerGrid wigner(const StateVector& state, int n_theta) {
  return wigner_of_wavefunction(state.amplitudes, state.basis, n_theta, 0);
}

WignerGrid wigner_from_eigensystem(const FloquetEigensystem& es, const CVector& coeffs, int j,
                                   int n_theta) {
  if (coeffs.size() != es.dim())
    throw std::invalid_argument("wigner_from_eigensystem: coefficient count mismatch");
  if (std::abs(coeffs.norm() - 1.0) > 1e-6)
    throw std::invalid_argument(
        "wigner_from_eigensystem: coefficients not from a normalized state");
  const CVector z = unit_powers(es.eigenvalues, j);
  const CVector psi = es.modes * (coeffs.array() * z.array()).matrix();
  return wigner_of_wavefunction(psi, es.basis, n_theta, j);
}

double spectral_autocorr(const FloquetEigensystem& es, int j) {
  const CMatrix ptilde = p0_in_floquet_basis(es);
  const RMatrix weights = ptilde.cwiseAbs2();
  const CVector z = unit_powers(es.eigenvalues, j);
  const Complex a = (z.transpose() * (weights * z.conjugate()))(0);
  if (std::abs(a.imag()) > 1e-9)
    throw std::runtime_error("spectral_autocorr: imaginary residue exceeds 1e-9");
  return a.real();
}

DiagnosticSeries spectral_autocorr_series(const FloquetEigensystem& es, int j_max) {
  const CMatrix ptilde = p0_in_floquet_basis(es);
  const RMatrix weights = ptilde.cwiseAbs2();
  DiagnosticSeries series;
  series.kind = SeriesKind::a_j;
  series.meta.method = MethodTag::eigensystem;
  series.meta.dim = es.dim();
  for (int j = 0; j <= j_max; ++j) {
    const CVector z = unit_powers(es.eigenvalues, j);
    const Complex a = (z.transpose() * (weights * z.conjugate()))(0);
    if (std::abs(a.imag()) > 1e-9)
      throw std::runtime_error("spectral_autocorr: imaginary residue exceeds 1e-9");
    series.times.push_back(j);
    series.values.push_back(a);
  }
  return series;
}

double spectral_form_factor(const FloquetEigensystem& es, int j) {
  Complex s(0.0, 0.0);
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i)
    s += std::polar(1.0, -es.quasi_energies(i) * static_cast<double>(j));
  return std::norm(s);
}

DiagnosticSeries spectral_form_factor_series(const FloquetEigensystem& es, int j_max) {
  DiagnosticSeries series;
  series.kind = SeriesKind::sff;
  series.meta.method = MethodTag::eigensystem;
  series.meta.dim = es.dim();
  for (int j = 0; j <= j_max; ++j) {
    series.times.push_back(j);
    series.values.push_back(Complex(spectral_form_factor(es, j), 0.0));
  }
  return series;
}

Complex heisenberg_p_element(const FloquetEigensystem& es, int m, int n, int j) {
  const BasisSpec& basis = es.basis;
  if (std::abs(m) > basis.cutoff || std::abs(n) > basis.cutoff)
    throw std::invalid_argument("heisenberg_p_element: |m|,|n| must be <= cutoff");
  const CMatrix ptilde = p0_in_floquet_basis(es);
  const CVector z = unit_powers(es.eigenvalues, j);
  const CVector u =
      (es.modes.row(basis.index_of(m)).transpose().array() * z.conjugate().array()).matrix();
  const CVector v =
      (es.modes.row(basis.index_of(n)).adjoint().array() * z.array()).matrix();
  return (u.transpose() * (ptilde * v))(0);
}

namespace {

// Shared per-eigensystem scratch for the commutator-route OTOC.
struct OtocWork {
  const FloquetEigensystem& es;
  CMatrix ptilde;
  RVector p;

  explicit OtocWork(const FloquetEigensystem& es_)
      : es(es_), ptilde(p0_in_floquet_basis(es_)), p(momentum_diagonal(es_.basis)) {}

  // P_j x = V diag(z*) ptilde diag(z) V^dag x
  CVector heisenberg_apply(const CVector& z, const CVector& x) const {
    CVector y = es.modes.adjoint() * x;
    y = (y.array() * z.array()).matrix();
    y = ptilde * y;
    y = (y.array() * z.conjugate().array()).matrix();
    return es.modes * y;
  }

  double commutator_norm_sq(const CVector& z, const CVector& psi) const {
    CVector p_psi = psi;
    for (Eigen::Index i = 0; i < p_psi.size(); ++i) p_psi(i) *= p(i);
    const CVector x1 = heisenberg_apply(z, p_psi);
    CVector x2 = heisenberg_apply(z, psi);
    for (Eigen::Index i = 0; i < x2.size(); ++i) x2(i) *= p(i);
    return (x1 - x2).squaredNorm();
  }

  double eigenstate_alt(const CVector& z, int n) const {
    const BasisSpec& basis = es.basis;
    CVector e = CVector::Zero(basis.dim());
    e(basis.index_of(n)) = Complex(1.0, 0.0);
    const CVector col = heisenberg_apply(z, e);  // col(m) = <m|P_j|n>
    double acc = 0.0;
    for (int i = 0; i < basis.dim(); ++i) {
      const double dn = static_cast<double>(n - basis.n_of(i));
      acc += dn * dn * std::norm(col(i));
    }
    return basis.hbar_eff * basis.hbar_eff * acc;
  }
};

double otoc_at(const OtocWork& work, const StateVector& psi0, int j) {
  const CVector z = unit_powers(work.es.eigenvalues, j);
  const double c = work.commutator_norm_sq(z, psi0.amplitudes);
  if (const auto n = eigenstate_label(psi0)) {
    const double alt = work.eigenstate_alt(z, *n);
    if (std::abs(c - alt) > 1e-8) {
      std::ostringstream msg;
      msg << "otoc: commutator-norm form " << c << " and eigenstate sum " << alt
          << " disagree by " << std::abs(c - alt) << " (> 1e-8) at j=" << j;
      throw std::runtime_error(msg.str());
    }
  }
  return c;
}

}  // namespace

double otoc(const FloquetEigensystem& es, const StateVector& psi0, int j) {
  require_normalized(psi0, "otoc");
  if (!(psi0.basis == es.basis)) throw std::invalid_argument("otoc: state/basis mismatch");
  const OtocWork work(es);
  return otoc_at(work, psi0, j);
}

DiagnosticSeries otoc_series(const FloquetEigensystem& es, const StateVector& psi0, int j_max) {
  require_normalized(psi0, "otoc");
  if (!(psi0.basis == es.basis)) throw std::invalid_argument("otoc: state/basis mismatch");
  const OtocWork work(es);
  DiagnosticSeries series;
  series.kind = SeriesKind::otoc;
  series.meta.method = MethodTag::eigensystem;
  series.meta.dim = es.dim();
  series.meta.initial_state = state_label(psi0);
  for (int j = 0; j <= j_max; ++j) {
    series.times.push_back(j);
    series.values.push_back(Complex(otoc_at(work, psi0, j), 0.0));
  }
  return series;
}

double otoc_eigenstate_alt(const FloquetEigensystem& es, int n, int j) {
  if (std::abs(n) > es.basis.cutoff)
    throw std::invalid_argument("otoc_eigenstate_alt: |n| exceeds cutoff");
  const OtocWork work(es);
  return work.eigenstate_alt(unit_powers(es.eigenvalues, j), n);
}

DiagnosticSeries energy_growth(const ModelParams& params, const StateVector& psi0, int j_max) {
  require_normalized(psi0, "energy_growth");
  const BasisSpec& basis = psi0.basis;
  const RVector p = momentum_diagonal(basis);
  const int margin = std::min(band_margin(params.k_kick), basis.cutoff);

  DiagnosticSeries series;
  series.kind = SeriesKind::p2;
  series.meta.method = MethodTag::direct;
  series.meta.dim = basis.dim();
  series.meta.initial_state = state_label(psi0);

  StateVector state = psi0;
  auto p2_of = [&](const StateVector& s) {
    double acc = 0.0;
    for (int i = 0; i < basis.dim(); ++i) acc += p(i) * p(i) * std::norm(s.amplitudes(i));
    return acc;
  };
  series.times.push_back(0);
  series.values.push_back(Complex(p2_of(state), 0.0));
  for (int j = 1; j <= j_max; ++j) {
    state = split_step_apply(params, state);
    if (edge_weight(state, margin) > 1e-8) {
      series.meta.truncated = true;
      series.meta.truncated_at = j;
      break;
    }
    series.times.push_back(j);
    series.values.push_back(Complex(p2_of(state), 0.0));
  }
  return series;
}

}  // namespace floquetlab
