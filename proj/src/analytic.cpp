#include "floquetlab/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "floquetlab/bessel.hpp"
#include "floquetlab/threading.hpp"

namespace floquetlab {

namespace {
constexpr double kBandFloor = 1e-14;
constexpr double kResonanceEps = 1e-12;
}

E2Element e2_canonical(double rot, double trans_mag, double trans_dir) {
  E2Element g;
  g.rot = wrap_angle(rot);
  if (trans_mag < 0.0) {
    trans_mag = -trans_mag;
    trans_dir += 3.14159265358979323846;
  }
  if (trans_mag < 1e-300) {
    g.trans_mag = 0.0;
    g.trans_dir = 0.0;
  } else {
    g.trans_mag = trans_mag;
    g.trans_dir = wrap_angle(trans_dir);
  }
  return g;
}

E2Element e2_identity() { return E2Element{}; }

E2Element e2_compose(const E2Element& g2, const E2Element& g1) {
  // Translation vectors as complex numbers: v = a e^{i phi}.
  const Complex v1 = std::polar(g1.trans_mag, g1.trans_dir);
  const Complex v2 = std::polar(g2.trans_mag, g2.trans_dir);
  const Complex v = std::polar(1.0, g2.rot) * v1 + v2;
  const double mag = std::abs(v);
  return e2_canonical(g2.rot + g1.rot, mag, mag > 0.0 ? std::arg(v) : 0.0);
}

E2Element e2_power(const E2Element& g, int j) {
  if (j < 0) throw std::invalid_argument("e2_power: j must be >= 0");
  if (j == 0) return e2_identity();
  const double half = 0.5 * g.rot;
  const double s = std::sin(half);
  if (std::abs(s) < kResonanceEps) {
    // Resonant rotation: fall back to exact repeated composition.
    E2Element acc = g;
    for (int step = 1; step < j; ++step) acc = e2_compose(g, acc);
    return acc;
  }
  const double ratio = std::sin(j * half) / s;
  const double dir = g.trans_dir + (j - 1) * half;
  return e2_canonical(j * g.rot, g.trans_mag * ratio, dir);
}

CMatrix e2_representation(const E2Element& g, const BasisSpec& basis) {
  const int dim = basis.dim();
  const auto jl = bessel_j_array(2 * basis.cutoff, g.trans_mag);
  CMatrix out(dim, dim);
  parallel_for(static_cast<size_t>(dim), [&](size_t col) {
    const int m = basis.n_of(static_cast<int>(col));
    const Complex rot_phase = std::polar(1.0, -m * g.rot);
    for (int row = 0; row < dim; ++row) {
      const int n = basis.n_of(row);
      const int d = m - n;
      double jv = jl[static_cast<size_t>(std::abs(d))];
      if (d < 0 && (d & 1)) jv = -jv;
      out(row, static_cast<Eigen::Index>(col)) =
          std::abs(jv) < kBandFloor
              ? Complex(0.0, 0.0)
              : rot_phase * std::polar(1.0, d * g.trans_dir) * jv;
    }
  });
  return out;
}

E2Element linear_rotor_element(const ModelParams& params) {
  if (params.kind != RotorKind::linear)
    throw std::invalid_argument("linear_rotor_element: kind must be linear");
  return e2_canonical(params.phi_free, params.k_kick, 1.5707963267948966);
}

FloquetMatrix linear_propagator_closed_form(const ModelParams& params, int j,
                                            const BasisSpec& basis) {
  if (params.kind != RotorKind::linear)
    throw std::invalid_argument("linear_propagator_closed_form: kind must be linear");
  if (j < 0) throw std::invalid_argument("linear_propagator_closed_form: j must be >= 0");
  params.validate(basis);

  FloquetMatrix out;
  out.params = params;
  out.basis = basis;
  if (std::abs(std::sin(0.5 * params.phi_free)) < kResonanceEps && j > 1) {
    // Resonant drift angle: the sine-ratio form degenerates; use the dense power.
    const FloquetMatrix u = build_linear_floquet(params, basis);
    CMatrix acc = CMatrix::Identity(basis.dim(), basis.dim());
    for (int step = 0; step < j; ++step) acc = u.entries * acc;
    out.entries = std::move(acc);
    return out;
  }
  out.entries = e2_representation(e2_power(linear_rotor_element(params), j), basis);
  return out;
}

double linear_echo_closed_form(double k_kick_delta, double phi_free, int j) {
  const double theta0 = 0.5 * phi_free;
  const double s = std::sin(theta0);
  if (std::abs(s) < kResonanceEps)
    throw std::invalid_argument(
        "linear_echo_closed_form: resonant theta0 (sin(phi_free/2) = 0); use the numeric route");
  const double arg = std::abs(k_kick_delta) * std::sin(j * theta0) / s;
  const double j0 = bessel_j(0, arg);
  return j0 * j0;
}

double linear_wigner_closed_form(int n_init, const ModelParams& params, int j, double theta,
                                 int p_l) {
  if (params.kind != RotorKind::linear)
    throw std::invalid_argument("linear_wigner_closed_form: kind must be linear");
  const E2Element gj = e2_power(linear_rotor_element(params), j);
  const double a = gj.trans_mag;
  const double phi = gj.trans_dir;
  const int nu = n_init - p_l;

  const int band = bessel_effective_band(a, 1e-18) + std::abs(nu) + 1;
  const auto jl = bessel_j_array(band + std::abs(nu), a);
  auto jv = [&](int order) {
    const int o = std::abs(order);
    double v = jl[static_cast<size_t>(o)];
    if (order < 0 && (o & 1)) v = -v;
    return v;
  };

  Complex acc(0.0, 0.0);
  for (int r = -band; r <= band; ++r)
    acc += jv(nu - r) * jv(nu + r) * std::polar(1.0, 2.0 * r * (theta - phi));
  if (std::abs(acc.imag()) > 1e-10)
    throw std::runtime_error("linear_wigner_closed_form: imaginary residue exceeds 1e-10");
  constexpr double kInvPi = 0.31830988618379067154;
  return kInvPi * acc.real();
}

}  // namespace floquetlab
