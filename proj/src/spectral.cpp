#include "floquetlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/FFT>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "floquetlab/threading.hpp"

namespace floquetlab {

namespace {

double effective_kick(const ModelParams& p) {
  double k = p.k_kick;
  if (p.kind == RotorKind::generic && p.kick_profile)
    for (double v : p.kick_profile->samples) k = std::max(k, std::abs(v));
  return k;
}

// Minimal unitary repair of a near-unitary matrix: U (U^dag U)^{-1/2}.
CMatrix polar_unitary(const CMatrix& u) {
  const CMatrix h = u.adjoint() * u;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("diagonalize: eigensolver failed on U^dag U");
  const RVector d = es.eigenvalues();
  if (d.minCoeff() <= 0.0)
    throw std::runtime_error("diagonalize: U^dag U is numerically singular; matrix too far from unitary");
  const RVector inv_sqrt = d.cwiseSqrt().cwiseInverse();
  return u * (es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint());
}

double eigenphase(Complex mu) {
  double e = -std::arg(mu);
  if (e < 0.0) e += kTwoPi;
  if (e >= kTwoPi) e = 0.0;
  return e;
}

}  // namespace

CMatrix unitary_closure(const CMatrix& u) { return polar_unitary(u); }

RVector quasi_energies(const CVector& eigenvalues) {
  RVector out(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) out(i) = eigenphase(eigenvalues(i));
  return out;
}

RVector quasi_energies(const FloquetEigensystem& es) { return quasi_energies(es.eigenvalues); }

FloquetEigensystem diagonalize(const FloquetMatrix& op) {
  const int dim = op.dim();
  const BasisSpec& basis = op.basis;
  // Columns deeper than one Bessel band from the cutoff must be unit norm;
  // a basis smaller than the band has no interior to check.
  const int margin = band_margin(effective_kick(op.params));

  double edge_dev = 0.0;
  for (int col = 0; col < dim; ++col) {
    const double dev = std::abs(op.entries.col(col).norm() - 1.0);
    edge_dev = std::max(edge_dev, dev);
    if (std::abs(basis.n_of(col)) <= basis.cutoff - margin && dev > 1e-10) {
      std::ostringstream msg;
      msg << "diagonalize: interior column m=" << basis.n_of(col) << " has norm deviation "
          << dev << " (> 1e-10); matrix violates interior unitarity";
      throw std::invalid_argument(msg.str());
    }
  }

  const CMatrix u_hat = polar_unitary(op.entries);

  Eigen::ComplexSchur<CMatrix> schur(u_hat, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("diagonalize: complex Schur decomposition failed");

  CVector mu(dim);
  for (int i = 0; i < dim; ++i) mu(i) = schur.matrixT()(i, i);

  // Sort modes by eigenphase for deterministic output.
  std::vector<int> order(static_cast<size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  RVector phases = quasi_energies(mu);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return phases(a) < phases(b); });

  FloquetEigensystem es;
  es.basis = basis;
  es.eigenvalues.resize(dim);
  es.modes.resize(dim, dim);
  for (int i = 0; i < dim; ++i) {
    es.eigenvalues(i) = mu(order[static_cast<size_t>(i)]);
    es.modes.col(i) = schur.matrixU().col(order[static_cast<size_t>(i)]);
  }
  es.quasi_energies = quasi_energies(es.eigenvalues);

  // Re-orthonormalize within numerically degenerate eigenphase clusters
  // (tolerance 1e-10); the rest of the basis is untouched.
  int start = 0;
  while (start < dim) {
    int stop = start + 1;
    while (stop < dim && es.quasi_energies(stop) - es.quasi_energies(stop - 1) <= 1e-10) ++stop;
    if (stop - start > 1) {
      const CMatrix block = es.modes.middleCols(start, stop - start);
      Eigen::HouseholderQR<CMatrix> qr(block);
      CMatrix thin_q = qr.householderQ() * CMatrix::Identity(dim, stop - start);
      es.modes.middleCols(start, stop - start) = thin_q;
    }
    start = stop;
  }

  es.edge_deviation = edge_dev;
  es.unitarity_gap = (op.entries - u_hat).cwiseAbs().maxCoeff();
  es.residual =
      (u_hat * es.modes - es.modes * es.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
  es.orthonormality =
      (es.modes.adjoint() * es.modes - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();

  if (es.residual > 1e-6) {
    std::ostringstream msg;
    msg << "diagonalize: residual " << es.residual << " exceeds 1e-6 (dim=" << dim
        << ", edge deviation=" << es.edge_deviation << ", unitarity gap=" << es.unitarity_gap
        << ")";
    throw std::runtime_error(msg.str());
  }
  for (int i = 0; i < dim; ++i)
    if (std::abs(std::abs(es.eigenvalues(i)) - 1.0) > 1e-8)
      throw std::runtime_error("diagonalize: eigenvalue off the unit circle by more than 1e-8");
  return es;
}

ToeplitzSystem cayley_coefficients(const std::vector<double>& profile_samples, int max_order,
                                   double tau_free, int lambda_grid) {
  const size_t g = profile_samples.size();
  if (g < 4 || (g & (g - 1)) != 0)
    throw std::invalid_argument("cayley_coefficients: sample count must be a power of two >= 4");
  if (max_order < 0 || static_cast<size_t>(max_order) > g / 2)
    throw std::invalid_argument("cayley_coefficients: max_order outside [0, Nyquist]");

  // tan(V/2hbar) pole guard: V/2hbar must stay >= 1e-3 away from pi/2 mod pi.
  constexpr double kHalfPi = 1.5707963267948966;
  for (size_t t = 0; t < g; ++t) {
    const double w = profile_samples[t] * 0.5;
    const double dist = std::abs(std::remainder(w - kHalfPi, kHalfPi * 2.0));
    if (dist < 1e-3) {
      std::ostringstream msg;
      msg << "cayley_coefficients: tan pole at sample " << t << " (theta=" << (kTwoPi * t / g)
          << "): V/2hbar=" << w << " is within 1e-3 of pi/2 mod pi";
      throw std::invalid_argument(msg.str());
    }
  }

  std::vector<Complex> w(g);
  for (size_t t = 0; t < g; ++t) w[t] = Complex(std::tan(profile_samples[t] * 0.5), 0.0);
  std::vector<Complex> spectrum(g);
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, w);

  ToeplitzSystem sys;
  sys.tau_free = tau_free;
  sys.lambda_grid = lambda_grid;
  const double inv_g = 1.0 / static_cast<double>(g);
  for (int k = 0; k <= max_order; ++k) {
    const size_t bin_p = static_cast<size_t>(k);
    const size_t bin_m = static_cast<size_t>((static_cast<int>(g) - k) % static_cast<int>(g));
    // Hermitian symmetry enforced exactly (V real).
    const Complex fk = 0.5 * (spectrum[bin_p] * inv_g + std::conj(spectrum[bin_m] * inv_g));
    sys.f_coeffs[k] = fk;
    if (k > 0) sys.f_coeffs[-k] = std::conj(fk);
  }
  return sys;
}

namespace {

struct ScanPoint {
  double lambda;
  double sigma_min;  // smallest |eigenvalue| of M(lambda)
  int negatives;     // count of negative eigenvalues (det sign parity)
};

CMatrix toeplitz_from_coeffs(const std::map<int, Complex>& f, int dim) {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const auto it = f.find(r - c);
      if (it != f.end()) out(r, c) = it->second;
    }
  return out;
}

}  // namespace

ScanResult hermitian_scan(const ToeplitzSystem& sys, const BasisSpec& basis) {
  const int dim = basis.dim();
  if (dim > 101)
    throw std::invalid_argument("hermitian_scan: dim > 101 (scan method is desk-scale)");

  const CMatrix f_mat = toeplitz_from_coeffs(sys.f_coeffs, dim);
  const double tau = sys.tau_free;

  // Diagonal tan poles in lambda: m^2 tau / 4 - lambda/2 = pi/2 mod pi gives
  // exactly one pole per |m| in [0, 2pi): lambda = m^2 tau / 2 + pi (mod 2pi).
  std::vector<double> poles;
  for (int m = 0; m <= basis.cutoff; ++m) {
    const double cand = wrap_angle(0.5 * m * m * tau + 3.14159265358979323846);
    bool dup = false;
    for (double p : poles)
      if (std::abs(std::remainder(p - cand, kTwoPi)) < 1e-12) dup = true;
    if (!dup) poles.push_back(cand);
  }
  std::sort(poles.begin(), poles.end());

  constexpr double kPoleExclusion = 1e-6;
  auto near_pole = [&](double lam) {
    for (double p : poles)
      if (std::abs(std::remainder(lam - p, kTwoPi)) < kPoleExclusion) return true;
    return false;
  };

  auto evaluate = [&](double lam) -> ScanPoint {
    CMatrix m = f_mat;
    for (int i = 0; i < dim; ++i) {
      const int q = basis.n_of(i);
      m(i, i) += Complex(std::tan(0.25 * q * q * tau - 0.5 * lam), 0.0);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    ScanPoint pt{lam, 0.0, 0};
    const RVector ev = es.eigenvalues();
    pt.sigma_min = ev.cwiseAbs().minCoeff();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) < 0.0) ++pt.negatives;
    return pt;
  };

  // Sample grid plus sentinels hugging each pole from both sides.
  std::vector<double> sample_at;
  sample_at.reserve(static_cast<size_t>(sys.lambda_grid) + 2 * poles.size());
  for (int i = 0; i < sys.lambda_grid; ++i)
    sample_at.push_back(kTwoPi * i / static_cast<double>(sys.lambda_grid));
  for (double p : poles) {
    sample_at.push_back(wrap_angle(p + 2.0 * kPoleExclusion));
    sample_at.push_back(wrap_angle(p - 2.0 * kPoleExclusion));
  }
  std::sort(sample_at.begin(), sample_at.end());
  sample_at.erase(std::remove_if(sample_at.begin(), sample_at.end(), near_pole),
                  sample_at.end());

  std::vector<ScanPoint> pts(sample_at.size());
  parallel_for(sample_at.size(), [&](size_t i) { pts[i] = evaluate(sample_at[i]); });
  if (pts.empty()) throw std::runtime_error("hermitian_scan: no valid sample points");

  // Close the circle: M(lambda) is 2pi-periodic, so the last->first gap is a
  // regular interval with the first point shifted by 2pi.
  ScanPoint wrap = pts.front();
  wrap.lambda += kTwoPi;
  pts.push_back(wrap);

  auto pole_between = [&](double a, double b) {
    for (double p : poles)
      for (double shift : {0.0, kTwoPi})
        if (p + shift > a && p + shift < b) return true;
    return false;
  };

  ScanResult result;

  // dM/dlambda = -(1/2) diag(sec^2) is negative definite, so every eigenvalue
  // branch of M(lambda) decreases strictly between poles: the increase of the
  // negative-eigenvalue count over a pole-free interval counts the roots
  // inside it exactly, with multiplicity.
  const std::function<void(double, int, double, int)> locate =
      [&](double a, int neg_a, double b, int neg_b) {
        const int crossings = neg_b - neg_a;
        if (crossings <= 0) return;
        if (b - a < 1e-8) {
          // Unresolvably close cluster (degenerate root): report the midpoint
          // once per crossing.
          for (int c = 0; c < crossings; ++c) result.lambdas.push_back(wrap_angle(0.5 * (a + b)));
          return;
        }
        const double mid = 0.5 * (a + b);
        const int neg_mid = evaluate(mid).negatives;
        locate(a, neg_a, mid, neg_mid);
        locate(mid, neg_mid, b, neg_b);
      };

  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const ScanPoint& lo = pts[i];
    const ScanPoint& hi = pts[i + 1];
    if (pole_between(lo.lambda, hi.lambda)) continue;
    locate(lo.lambda, lo.negatives, hi.lambda, hi.negatives);
  }
  std::sort(result.lambdas.begin(), result.lambdas.end());

  if (static_cast<int>(result.lambdas.size()) < dim) {
    // Possible roots hiding in pole-exclusion zones: report the nearby
    // sigma_min minima instead of guessing.
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
      if (pts[i].sigma_min < pts[i - 1].sigma_min && pts[i].sigma_min <= pts[i + 1].sigma_min) {
        bool matched = false;
        for (double r : result.lambdas)
          if (std::abs(std::remainder(pts[i].lambda - r, kTwoPi)) < 5.0 * kTwoPi / sys.lambda_grid)
            matched = true;
        if (!matched) result.unresolved_minima.emplace_back(pts[i].lambda, pts[i].sigma_min);
      }
    }
    std::sort(result.unresolved_minima.begin(), result.unresolved_minima.end(),
              [](auto& a, auto& b) { return a.second < b.second; });
    if (result.unresolved_minima.size() > 16) result.unresolved_minima.resize(16);
  }
  result.complete = static_cast<int>(result.lambdas.size()) >= dim;
  return result;
}

FloquetMatrix cayley_floquet(const ToeplitzSystem& sys, const BasisSpec& basis) {
  const int dim = basis.dim();
  const CMatrix f_mat = toeplitz_from_coeffs(sys.f_coeffs, dim);
  const CMatrix plus = CMatrix::Identity(dim, dim) + kImag * f_mat;
  const CMatrix minus = CMatrix::Identity(dim, dim) - kImag * f_mat;
  CMatrix kick = plus.partialPivLu().solve(minus);  // (1+iF)^{-1}(1-iF), F Hermitian
  FloquetMatrix out;
  out.basis = basis;
  out.params.kind = RotorKind::standard;
  out.params.tau_free = sys.tau_free;
  double strength = 0.0;
  for (const auto& [k, v] : sys.f_coeffs) strength += std::abs(v);
  out.params.k_kick = strength;
  out.entries.resize(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const int m = basis.n_of(col);
    out.entries.col(col) = kick.col(col) * std::polar(1.0, -0.5 * m * m * sys.tau_free);
  }
  return out;
}

double apply_szego_function(SzegoFunction f, double x) {
  switch (f) {
    case SzegoFunction::identity: return x;
    case SzegoFunction::square: return x * x;
    case SzegoFunction::abs_value: return std::abs(x);
    case SzegoFunction::cosine: return std::cos(x);
  }
  throw std::invalid_argument("apply_szego_function: unsupported function");
}

SzegoAverage szego_average(const std::map<int, Complex>& symbol_coeffs, SzegoFunction f, int n) {
  if (n < 1 || n > 4096) throw std::invalid_argument("szego_average: n outside [1, 4096]");
  for (const auto& [k, v] : symbol_coeffs) {
    const auto it = symbol_coeffs.find(-k);
    const Complex other = it == symbol_coeffs.end() ? Complex(0.0, 0.0) : it->second;
    if (std::abs(v - std::conj(other)) > 1e-12)
      throw std::invalid_argument("szego_average: symbol is not real (f_{-k} != conj(f_k)) at k=" +
                                  std::to_string(k));
  }

  const CMatrix section = toeplitz_from_coeffs(symbol_coeffs, n);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(section, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("szego_average: eigensolver failed on the Toeplitz section");

  SzegoAverage out;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) acc += apply_szego_function(f, es.eigenvalues()(i));
  out.finite_avg = acc / static_cast<double>(n);

  auto symbol = [&](double theta) {
    Complex s(0.0, 0.0);
    for (const auto& [k, v] : symbol_coeffs) s += v * std::polar(1.0, k * theta);
    return s.real();
  };
  auto integrand = [&](double theta) { return apply_szego_function(f, symbol(theta)); };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, kTwoPi, 15, 1e-10);
  out.limit = integral / kTwoPi;
  return out;
}

}  // namespace floquetlab
