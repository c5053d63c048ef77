#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "floquetlab/analytic.hpp"
#include "floquetlab/bessel.hpp"
#include "floquetlab/classical.hpp"
#include "floquetlab/diagnostics.hpp"
#include "floquetlab/runner.hpp"
#include "floquetlab/spectral.hpp"
#include "floquetlab/threading.hpp"

namespace py = pybind11;
using namespace floquetlab;

namespace {

ModelParams make_params(const std::string& kind, double k_kick, double tau_free,
                        double phi_free, const std::optional<std::vector<double>>& profile,
                        const std::string& phase_sign) {
  ModelParams p;
  if (kind == "standard")
    p.kind = RotorKind::standard;
  else if (kind == "linear")
    p.kind = RotorKind::linear;
  else if (kind == "generic")
    p.kind = RotorKind::generic;
  else
    throw std::invalid_argument("kind must be standard|linear|generic");
  p.k_kick = k_kick;
  p.tau_free = tau_free;
  p.phi_free = phi_free;
  if (profile) p.kick_profile = KickProfile{*profile};
  if (phase_sign == "derived")
    p.phase_sign = PhaseSign::derived;
  else if (phase_sign == "paper")
    p.phase_sign = PhaseSign::paper;
  else
    throw std::invalid_argument("phase_sign must be derived|paper");
  return p;
}

StateVector state_from_array(const CVector& amplitudes, const BasisSpec& basis) {
  if (amplitudes.size() != basis.dim())
    throw std::invalid_argument("amplitude count does not match basis dim");
  StateVector s;
  s.basis = basis;
  s.amplitudes = amplitudes;
  return s;
}

py::dict series_to_dict(const DiagnosticSeries& s) {
  py::dict d;
  d["times"] = s.times;
  std::vector<Complex> vals = s.values;
  d["values"] = vals;
  d["method"] = s.meta.method == MethodTag::direct ? "direct" : "eigensystem";
  d["truncated"] = s.meta.truncated;
  d["truncated_at"] = s.meta.truncated_at;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kicked-rotor Floquet operators and quantum-chaos diagnostics";
  m.attr("__version__") = FLOQUETLAB_VERSION;

  py::class_<BasisSpec>(m, "BasisSpec")
      .def(py::init<int, double>(), py::arg("cutoff"), py::arg("hbar_eff") = 1.0)
      .def_readonly("cutoff", &BasisSpec::cutoff)
      .def_readonly("hbar_eff", &BasisSpec::hbar_eff)
      .def_property_readonly("dim", &BasisSpec::dim)
      .def("__repr__", [](const BasisSpec& b) {
        return "BasisSpec(cutoff=" + std::to_string(b.cutoff) +
               ", hbar_eff=" + std::to_string(b.hbar_eff) + ")";
      });

  py::class_<FloquetMatrix>(m, "FloquetMatrix")
      .def_property_readonly("entries", [](const FloquetMatrix& f) { return f.entries; })
      .def_property_readonly("dim", &FloquetMatrix::dim);

  py::class_<FloquetEigensystem>(m, "FloquetEigensystem")
      .def_property_readonly("eigenvalues",
                             [](const FloquetEigensystem& e) { return e.eigenvalues; })
      .def_property_readonly("quasi_energies",
                             [](const FloquetEigensystem& e) { return e.quasi_energies; })
      .def_property_readonly("modes", [](const FloquetEigensystem& e) { return e.modes; })
      .def_readonly("residual", &FloquetEigensystem::residual)
      .def_readonly("orthonormality", &FloquetEigensystem::orthonormality)
      .def_readonly("edge_deviation", &FloquetEigensystem::edge_deviation)
      .def_readonly("unitarity_gap", &FloquetEigensystem::unitarity_gap);

  m.def("bessel_j", &bessel_j, py::arg("order"), py::arg("x"));
  m.def("band_margin", &band_margin, py::arg("k_kick"));
  m.def("default_cutoff", &default_cutoff, py::arg("k_kick"));
  m.def("set_thread_count", &set_thread_count, py::arg("n"));

  m.def(
      "build_floquet",
      [](const std::string& kind, double k_kick, const BasisSpec& basis, double tau_free,
         double phi_free, const std::optional<std::vector<double>>& kick_profile,
         const std::string& phase_sign) {
        return build_floquet(
            make_params(kind, k_kick, tau_free, phi_free, kick_profile, phase_sign), basis);
      },
      py::arg("kind"), py::arg("k_kick"), py::arg("basis"), py::arg("tau_free") = 0.0,
      py::arg("phi_free") = 0.0, py::arg("kick_profile") = std::nullopt,
      py::arg("phase_sign") = "derived");

  m.def("diagonalize", &diagonalize, py::arg("floquet_matrix"));

  m.def(
      "momentum_eigenstate",
      [](const BasisSpec& basis, int n) { return momentum_eigenstate(basis, n).amplitudes; },
      py::arg("basis"), py::arg("n"));

  m.def(
      "propagate",
      [](const FloquetMatrix& u, const CVector& psi, int j) {
        return propagate(u, state_from_array(psi, u.basis), j).amplitudes;
      },
      py::arg("floquet_matrix"), py::arg("state"), py::arg("j"));

  m.def(
      "split_step_apply",
      [](const std::string& kind, double k_kick, double tau_free,
         const std::optional<std::vector<double>>& kick_profile, const BasisSpec& basis,
         const CVector& psi, const std::string& phase_sign) {
        return split_step_apply(
                   make_params(kind, k_kick, tau_free, 0.0, kick_profile, phase_sign),
                   state_from_array(psi, basis))
            .amplitudes;
      },
      py::arg("kind"), py::arg("k_kick"), py::arg("tau_free"), py::arg("kick_profile"),
      py::arg("basis"), py::arg("state"), py::arg("phase_sign") = "derived");

  m.def("echo_single_kick", &echo_single_kick, py::arg("n_init"), py::arg("k"),
        py::arg("k_prime"), py::arg("basis"));

  m.def(
      "loschmidt_echo_direct",
      [](const std::string& kind, double k_kick, double tau_free, double phi_free,
         const BasisSpec& basis, double delta_k, const CVector& psi0, int j_max) {
        return series_to_dict(loschmidt_echo_direct(
            make_params(kind, k_kick, tau_free, phi_free, std::nullopt, "derived"), basis,
            delta_k, state_from_array(psi0, basis), j_max));
      },
      py::arg("kind"), py::arg("k_kick"), py::arg("tau_free"), py::arg("phi_free"),
      py::arg("basis"), py::arg("delta_k"), py::arg("psi0"), py::arg("j_max"));

  m.def(
      "loschmidt_echo_floquet",
      [](const FloquetEigensystem& es_k, const FloquetEigensystem& es_kp, const CVector& psi0,
         int j_max) {
        return series_to_dict(
            loschmidt_echo_floquet(es_k, es_kp, state_from_array(psi0, es_k.basis), j_max));
      },
      py::arg("es_k"), py::arg("es_kp"), py::arg("psi0"), py::arg("j_max"));

  m.def(
      "wigner",
      [](const CVector& psi, const BasisSpec& basis, int n_theta) {
        const WignerGrid g = wigner(state_from_array(psi, basis), n_theta);
        py::dict d;
        d["theta"] = g.theta;
        d["p_labels"] = g.p_labels;
        d["values"] = g.values;
        d["imag_residue"] = g.max_imag_residue;
        return d;
      },
      py::arg("state"), py::arg("basis"), py::arg("n_theta"));

  m.def("spectral_autocorr", &spectral_autocorr, py::arg("eigensystem"), py::arg("j"));
  m.def("spectral_form_factor", &spectral_form_factor, py::arg("eigensystem"), py::arg("j"));
  m.def("heisenberg_p_element", &heisenberg_p_element, py::arg("eigensystem"), py::arg("m"),
        py::arg("n"), py::arg("j"));
  m.def(
      "otoc",
      [](const FloquetEigensystem& es, const CVector& psi0, int j) {
        return otoc(es, state_from_array(psi0, es.basis), j);
      },
      py::arg("eigensystem"), py::arg("psi0"), py::arg("j"));

  m.def(
      "energy_growth",
      [](const std::string& kind, double k_kick, double tau_free,
         const std::optional<std::vector<double>>& kick_profile, const BasisSpec& basis,
         const CVector& psi0, int j_max) {
        return series_to_dict(
            energy_growth(make_params(kind, k_kick, tau_free, 0.0, kick_profile, "derived"),
                          state_from_array(psi0, basis), j_max));
      },
      py::arg("kind"), py::arg("k_kick"), py::arg("tau_free"), py::arg("kick_profile"),
      py::arg("basis"), py::arg("psi0"), py::arg("j_max"));

  m.def("linear_echo_closed_form", &linear_echo_closed_form, py::arg("delta_k"),
        py::arg("phi_free"), py::arg("j"));
  m.def(
      "linear_wigner_closed_form",
      [](int n_init, double k_kick, double phi_free, int j, double theta, int p_l,
         const BasisSpec& basis) {
        return linear_wigner_closed_form(
            n_init, make_params("linear", k_kick, 0.0, phi_free, std::nullopt, "derived"), j,
            theta, p_l);
      },
      py::arg("n_init"), py::arg("k_kick"), py::arg("phi_free"), py::arg("j"), py::arg("theta"),
      py::arg("p_l"), py::arg("basis"));

  m.def(
      "chirikov_step",
      [](double theta, double momentum, double K, double T) {
        const PhasePoint next = chirikov_step(PhasePoint{theta, momentum}, K, T);
        return py::make_tuple(next.theta, next.momentum);
      },
      py::arg("theta"), py::arg("momentum"), py::arg("K"), py::arg("T"));

  m.def(
      "ensemble_second_moment",
      [](double K, double T, int n_points, std::uint64_t seed, int j_max) {
        return series_to_dict(ensemble_second_moment(K, T, n_points, seed, j_max));
      },
      py::arg("K"), py::arg("T"), py::arg("n_points"), py::arg("seed"), py::arg("j_max"));

  m.def(
      "szego_average",
      [](const std::map<int, Complex>& coeffs, const std::string& f, int n) {
        SzegoFunction fn;
        if (f == "x")
          fn = SzegoFunction::identity;
        else if (f == "x^2")
          fn = SzegoFunction::square;
        else if (f == "abs")
          fn = SzegoFunction::abs_value;
        else if (f == "cos")
          fn = SzegoFunction::cosine;
        else
          throw std::invalid_argument("f must be one of: x, x^2, abs, cos");
        const SzegoAverage avg = szego_average(coeffs, fn, n);
        return py::make_tuple(avg.finite_avg, avg.limit);
      },
      py::arg("symbol_coeffs"), py::arg("f"), py::arg("n"));

  m.def(
      "cayley_coefficients",
      [](const std::vector<double>& profile, int max_order, double tau_free) {
        const ToeplitzSystem sys = cayley_coefficients(profile, max_order, tau_free);
        return sys.f_coeffs;
      },
      py::arg("profile"), py::arg("max_order"), py::arg("tau_free"));

  m.def(
      "hermitian_scan",
      [](const std::map<int, Complex>& f_coeffs, double tau_free, const BasisSpec& basis,
         int lambda_grid) {
        ToeplitzSystem sys;
        sys.f_coeffs = f_coeffs;
        sys.tau_free = tau_free;
        sys.lambda_grid = lambda_grid;
        const ScanResult r = hermitian_scan(sys, basis);
        py::dict d;
        d["lambdas"] = r.lambdas;
        d["complete"] = r.complete;
        d["unresolved_minima"] = r.unresolved_minima;
        return d;
      },
      py::arg("f_coeffs"), py::arg("tau_free"), py::arg("basis"),
      py::arg("lambda_grid") = 10000);
}
