#include "floquetlab/runner.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "floquetlab/analytic.hpp"
#include "floquetlab/classical.hpp"
#include "floquetlab/diagnostics.hpp"
#include "floquetlab/spectral.hpp"
#include "floquetlab/threading.hpp"

#ifndef FLOQUETLAB_VERSION
#define FLOQUETLAB_VERSION "0.0.0"
#endif

namespace floquetlab {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Resolved-config echo: enough metadata to re-run the computation exactly.
std::map<std::string, std::string> meta_of(const RunConfig& cfg, const BasisSpec& basis) {
  std::map<std::string, std::string> m;
  m["version"] = FLOQUETLAB_VERSION;
  m["model.kind"] = to_string(cfg.kind);
  m["model.k_kick"] = fmt17(cfg.k_kick);
  if (cfg.tau_free) m["model.tau_free"] = fmt17(*cfg.tau_free);
  if (cfg.phi_free) m["model.phi_free"] = fmt17(*cfg.phi_free);
  if (cfg.kick_profile_name) m["model.kick_profile"] = *cfg.kick_profile_name;
  m["model.phase_sign"] = to_string(cfg.phase_sign);
  m["basis.cutoff"] = std::to_string(basis.cutoff);
  m["basis.hbar_eff"] = fmt17(basis.hbar_eff);
  m["basis.dim"] = std::to_string(basis.dim());
  m["basis.band_margin"] = std::to_string(band_margin(cfg.k_kick));
  m["task.name"] = to_string(cfg.task);
  m["task.j_max"] = std::to_string(cfg.j_max);
  if (cfg.delta_k) m["task.delta_k"] = fmt17(*cfg.delta_k);
  m["task.initial_n"] = std::to_string(cfg.initial_n);
  m["task.j"] = std::to_string(cfg.j_snapshot);
  if (cfg.n_theta) m["task.n_theta"] = std::to_string(*cfg.n_theta);
  m["task.n_points"] = std::to_string(cfg.n_points);
  m["task.seed"] = std::to_string(cfg.seed);
  m["output.format"] = to_string(cfg.format);
  return m;
}

json meta_json(const std::map<std::string, std::string>& meta) {
  json j = json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

class Writer {
 public:
  Writer(const RunConfig& cfg, const BasisSpec& basis, RunResult& result)
      : cfg_(cfg), meta_(meta_of(cfg, basis)), result_(result) {
    fs::create_directories(cfg.output_path);
  }

  void note(const std::string& key, const std::string& value) { meta_[key] = value; }

  // Tabular series: fixed column names, 17 significant digits.
  void table(const std::string& stem, const std::vector<std::string>& columns,
             const std::vector<std::vector<double>>& rows) {
    if (cfg_.format == OutputFormat::csv) {
      std::ofstream out(path(stem + ".csv"), std::ios::binary);
      for (const auto& [k, v] : meta_) out << "# " << k << " = " << v << "\n";
      for (size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
      out << "\n";
      for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt17(row[c]);
        out << "\n";
      }
      result_.files_written.push_back(path(stem + ".csv"));
    } else {
      json j;
      j["meta"] = meta_json(meta_);
      j["columns"] = columns;
      j["data"] = json::array();
      for (const auto& row : rows) j["data"].push_back(row);
      std::ofstream out(path(stem + ".json"), std::ios::binary);
      out << j.dump(2) << "\n";
      result_.files_written.push_back(path(stem + ".json"));
    }
  }

  void sidecar(const std::string& name, const json& body) {
    json j;
    j["meta"] = meta_json(meta_);
    j.update(body);
    std::ofstream out(path(name), std::ios::binary);
    out << j.dump(2) << "\n";
    result_.files_written.push_back(path(name));
  }

  std::string path(const std::string& name) const {
    return (fs::path(cfg_.output_path) / name).string();
  }

 private:
  const RunConfig& cfg_;
  std::map<std::string, std::string> meta_;
  RunResult& result_;
};

std::vector<std::vector<double>> series_rows(const DiagnosticSeries& s, bool complex_values) {
  std::vector<std::vector<double>> rows;
  rows.reserve(s.times.size());
  for (size_t i = 0; i < s.times.size(); ++i) {
    std::vector<double> row{static_cast<double>(s.times[i]), s.values[i].real()};
    if (complex_values) row.push_back(s.values[i].imag());
    rows.push_back(std::move(row));
  }
  return rows;
}

void annotate_series(Writer& w, const std::string& prefix, const DiagnosticSeries& s) {
  w.note(prefix + ".method", s.meta.method == MethodTag::direct ? "direct" : "eigensystem");
  if (!s.meta.initial_state.empty()) w.note(prefix + ".initial_state", s.meta.initial_state);
  w.note(prefix + ".truncated", s.meta.truncated ? "true" : "false");
  if (s.meta.truncated) w.note(prefix + ".truncated_at", std::to_string(s.meta.truncated_at));
}

void annotate_eigensystem(Writer& w, const FloquetEigensystem& es) {
  w.note("eigensystem.residual", fmt17(es.residual));
  w.note("eigensystem.orthonormality", fmt17(es.orthonormality));
  w.note("eigensystem.edge_deviation", fmt17(es.edge_deviation));
  w.note("eigensystem.unitarity_gap", fmt17(es.unitarity_gap));
}

void run_spectrum(const RunConfig& cfg, Writer& w, const BasisSpec& basis,
                  const ModelParams& params) {
  const FloquetEigensystem es = diagonalize(build_floquet(params, basis));
  annotate_eigensystem(w, es);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < es.dim(); ++i)
    rows.push_back({static_cast<double>(i), es.quasi_energies(i), es.eigenvalues(i).real(),
                    es.eigenvalues(i).imag()});
  w.table("spectrum", {"n", "eps", "mu_re", "mu_im"}, rows);
}

void run_echo(const RunConfig& cfg, Writer& w, const BasisSpec& basis,
              const ModelParams& params) {
  const StateVector psi0 = momentum_eigenstate(basis, cfg.initial_n);
  const DiagnosticSeries direct =
      loschmidt_echo_direct(params, basis, *cfg.delta_k, psi0, cfg.j_max);

  ModelParams perturbed = params;
  perturbed.k_kick += *cfg.delta_k;
  const FloquetEigensystem es_k = diagonalize(build_floquet(params, basis));
  const FloquetEigensystem es_kp = diagonalize(build_floquet(perturbed, basis));
  const DiagnosticSeries floquet_route =
      loschmidt_echo_floquet(es_k, es_kp, psi0, cfg.j_max);

  annotate_eigensystem(w, es_k);
  annotate_series(w, "series", direct);
  w.table("echo_direct", {"j", "L"}, series_rows(direct, false));
  annotate_series(w, "series", floquet_route);
  w.table("echo_floquet", {"j", "L"}, series_rows(floquet_route, false));
}

void run_wigner(const RunConfig& cfg, Writer& w, const BasisSpec& basis,
                const ModelParams& params) {
  const StateVector psi0 = momentum_eigenstate(basis, cfg.initial_n);
  const FloquetMatrix u = build_floquet(params, basis);
  const StateVector state = propagate(u, psi0, cfg.j_snapshot);
  int n_theta = cfg.n_theta ? *cfg.n_theta : std::max(2 * basis.dim(), 128);
  if (n_theta % 2 != 0) ++n_theta;
  WignerGrid grid = wigner(state, n_theta);
  grid.time_index = cfg.j_snapshot;

  w.note("wigner.n_theta", std::to_string(n_theta));
  w.note("wigner.imag_residue", fmt17(grid.max_imag_residue));
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(n_theta) * grid.p_labels.size());
  for (Eigen::Index t = 0; t < grid.theta.size(); ++t)
    for (size_t l = 0; l < grid.p_labels.size(); ++l)
      rows.push_back({grid.theta(t), static_cast<double>(grid.p_labels[l]),
                      grid.values(t, static_cast<Eigen::Index>(l))});
  w.table("wigner", {"theta", "p_l", "W"}, rows);

  json sidecar;
  sidecar["grid"] = {{"n_theta", n_theta},
                     {"theta_min", 0.0},
                     {"theta_step", kTwoPi / n_theta},
                     {"p_min", grid.p_labels.front()},
                     {"p_max", grid.p_labels.back()},
                     {"time_index", grid.time_index},
                     {"imag_residue", grid.max_imag_residue}};
  w.sidecar("wigner_grid.json", sidecar);
}

void run_otoc(const RunConfig& cfg, Writer& w, const BasisSpec& basis,
              const ModelParams& params) {
  const FloquetEigensystem es = diagonalize(build_floquet(params, basis));
  annotate_eigensystem(w, es);
  const StateVector psi0 = momentum_eigenstate(basis, cfg.initial_n);
  const DiagnosticSeries series = otoc_series(es, psi0, cfg.j_max);
  annotate_series(w, "series", series);
  w.table("otoc", {"j", "C"}, series_rows(series, false));
}

void run_autocorr(const RunConfig& cfg, Writer& w, const BasisSpec& basis,
                  const ModelParams& params) {
  const FloquetEigensystem es = diagonalize(build_floquet(params, basis));
  annotate_eigensystem(w, es);
  const DiagnosticSeries series = spectral_autocorr_series(es, cfg.j_max);
  annotate_series(w, "series", series);
  w.table("autocorr", {"j", "A_re", "A_im"}, series_rows(series, true));
}

void run_sff(const RunConfig& cfg, Writer& w, const BasisSpec& basis,
             const ModelParams& params) {
  const FloquetEigensystem es = diagonalize(build_floquet(params, basis));
  annotate_eigensystem(w, es);
  const DiagnosticSeries series = spectral_form_factor_series(es, cfg.j_max);
  annotate_series(w, "series", series);
  w.table("sff", {"j", "S"}, series_rows(series, false));
}

void run_localization(const RunConfig& cfg, Writer& w, const BasisSpec& basis,
                      const ModelParams& params) {
  const StateVector psi0 = momentum_eigenstate(basis, cfg.initial_n);
  const DiagnosticSeries quantum = energy_growth(params, psi0, cfg.j_max);
  annotate_series(w, "series", quantum);
  w.table("localization_quantum", {"j", "P2"}, series_rows(quantum, false));

  // Classical comparison map: K = k_kick * hbar, T = tau_free / hbar.
  const double K = cfg.k_kick * basis.hbar_eff;
  const double T = (cfg.tau_free ? *cfg.tau_free : 0.0) / basis.hbar_eff;
  const DiagnosticSeries classical =
      ensemble_second_moment(K, T, cfg.n_points, cfg.seed, cfg.j_max);
  w.note("classical.K", fmt17(K));
  w.note("classical.T", fmt17(T));
  w.table("localization_classical", {"j", "P2"}, series_rows(classical, false));
}

void run_classical(const RunConfig& cfg, Writer& w, const BasisSpec& basis) {
  const double K = cfg.k_kick * basis.hbar_eff;
  const double T = (cfg.tau_free ? *cfg.tau_free : 0.0) / basis.hbar_eff;
  const DiagnosticSeries series =
      ensemble_second_moment(K, T, cfg.n_points, cfg.seed, cfg.j_max);
  w.note("classical.K", fmt17(K));
  w.note("classical.T", fmt17(T));
  w.table("classical", {"j", "P2"}, series_rows(series, false));
}

// Closed-form-vs-numeric checks for the linear rotor; the exit gate of the
// oracle-check task.
int run_oracle_check(const RunConfig& cfg, Writer& w, const BasisSpec& basis,
                     const ModelParams& params) {
  json checks = json::array();
  bool all_pass = true;
  const int j_max = std::min(cfg.j_max, 20);

  // The exact j-kick propagator is banded at the accumulated-translation
  // magnitude A_j; interior comparisons stay that far plus one kick band away
  // from the cutoff.
  double a_max = params.k_kick;
  for (int j = 1; j <= j_max; ++j)
    a_max = std::max(a_max, e2_power(linear_rotor_element(params), j).trans_mag);
  const int interior_margin = band_margin(a_max) + band_margin(params.k_kick) + 5;
  w.note("oracle.interior_margin", std::to_string(interior_margin));
  if (interior_margin >= basis.cutoff)
    throw std::invalid_argument(
        "oracle-check: cutoff " + std::to_string(basis.cutoff) +
        " leaves no interior block (need > " + std::to_string(interior_margin) + ")");

  auto add_check = [&](const std::string& name, double dev, double tol) {
    checks.push_back({{"name", name}, {"max_deviation", dev}, {"tolerance", tol},
                      {"pass", dev < tol}});
    if (!(dev < tol)) all_pass = false;
  };

  // Propagator: closed form vs dense power on the interior block.
  {
    const FloquetMatrix u = build_linear_floquet(params, basis);
    CMatrix dense = CMatrix::Identity(basis.dim(), basis.dim());
    double worst = 0.0;
    for (int j = 1; j <= j_max; ++j) {
      dense = u.entries * dense;
      const FloquetMatrix closed = linear_propagator_closed_form(params, j, basis);
      double dev = 0.0;
      for (int r = 0; r < basis.dim(); ++r)
        for (int c = 0; c < basis.dim(); ++c)
          if (std::abs(basis.n_of(r)) <= basis.cutoff - interior_margin &&
              std::abs(basis.n_of(c)) <= basis.cutoff - interior_margin)
            dev = std::max(dev, std::abs(dense(r, c) - closed.entries(r, c)));
      worst = std::max(worst, dev);
    }
    add_check("propagator_closed_vs_dense_power", worst, 1e-8);
  }

  // Echo: closed form vs direct propagation.
  {
    const double delta = cfg.delta_k ? *cfg.delta_k : 0.1;
    const StateVector psi0 = momentum_eigenstate(basis, cfg.initial_n);
    const DiagnosticSeries direct =
        loschmidt_echo_direct(params, basis, delta, psi0, j_max);
    double worst = 0.0;
    for (size_t i = 0; i < direct.times.size(); ++i) {
      const double closed =
          linear_echo_closed_form(delta, params.phi_free, direct.times[i]);
      worst = std::max(worst, std::abs(closed - direct.values[i].real()));
    }
    add_check("echo_closed_vs_direct", worst, 1e-8);
  }

  // Wigner: closed form vs numeric grid at the final kick.
  {
    const StateVector psi0 = momentum_eigenstate(basis, cfg.initial_n);
    const FloquetMatrix u = build_linear_floquet(params, basis);
    const StateVector evolved = propagate(u, psi0, j_max);
    const WignerGrid grid = wigner(evolved, 2 * basis.dim());
    double worst = 0.0;
    for (Eigen::Index t = 0; t < grid.theta.size(); t += 7) {
      for (size_t l = 0; l < grid.p_labels.size(); l += 3) {
        const int p = grid.p_labels[l];
        const double closed =
            linear_wigner_closed_form(cfg.initial_n, params, j_max, grid.theta(t), p);
        worst = std::max(worst,
                         std::abs(closed - grid.values(t, static_cast<Eigen::Index>(l))));
      }
    }
    add_check("wigner_closed_vs_numeric", worst, 1e-8);
  }

  w.sidecar("oracle_check.json", json{{"checks", checks}, {"all_pass", all_pass}});
  return all_pass ? 0 : 1;
}

}  // namespace

RunResult run_task(const RunConfig& cfg) {
  RunResult result;
  try {
    const BasisSpec basis = cfg.basis_spec();
    Writer writer(cfg, basis, result);
    switch (cfg.task) {
      case TaskKind::spectrum: {
        run_spectrum(cfg, writer, basis, cfg.model_params(basis));
        break;
      }
      case TaskKind::echo: {
        run_echo(cfg, writer, basis, cfg.model_params(basis));
        break;
      }
      case TaskKind::wigner: {
        run_wigner(cfg, writer, basis, cfg.model_params(basis));
        break;
      }
      case TaskKind::otoc: {
        run_otoc(cfg, writer, basis, cfg.model_params(basis));
        break;
      }
      case TaskKind::autocorr: {
        run_autocorr(cfg, writer, basis, cfg.model_params(basis));
        break;
      }
      case TaskKind::sff: {
        run_sff(cfg, writer, basis, cfg.model_params(basis));
        break;
      }
      case TaskKind::localization: {
        run_localization(cfg, writer, basis, cfg.model_params(basis));
        break;
      }
      case TaskKind::classical: {
        run_classical(cfg, writer, basis);
        break;
      }
      case TaskKind::oracle_check: {
        result.exit_code = run_oracle_check(cfg, writer, basis, cfg.model_params(basis));
        break;
      }
    }
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    err["task"] = to_string(cfg.task);
    result.error_record = err.dump();
    result.exit_code = 2;
  }
  return result;
}

}  // namespace floquetlab
