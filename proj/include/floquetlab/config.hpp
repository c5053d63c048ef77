#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "floquetlab/floquet_op.hpp"

namespace floquetlab {

enum class TaskKind {
  spectrum,
  echo,
  wigner,
  otoc,
  autocorr,
  sff,
  localization,
  classical,
  oracle_check
};

enum class OutputFormat { csv, json };

// Parsed and validated run description. Line format: `key = value` under
// one-level [section] headers, `#` comments. Unknown keys are rejected.
struct RunConfig {
  // [model]
  RotorKind kind = RotorKind::standard;
  double k_kick = 0.0;
  std::optional<double> tau_free;
  std::optional<double> phi_free;
  std::optional<std::string> kick_profile_name;  // "cos" | "sin" (generic kind)
  PhaseSign phase_sign = PhaseSign::derived;

  // [basis]
  std::optional<int> cutoff;  // absent -> truncation rule default
  double hbar_eff = 1.0;

  // [task]
  TaskKind task = TaskKind::spectrum;
  int j_max = 50;
  std::optional<double> delta_k;
  int initial_n = 0;
  int j_snapshot = 0;           // wigner: kick count before the snapshot
  std::optional<int> n_theta;   // wigner grid size
  int n_points = 10000;         // classical ensemble size
  std::uint64_t seed = 20260810;

  // [output]
  std::string output_path = ".";
  OutputFormat format = OutputFormat::csv;

  BasisSpec basis_spec() const;
  ModelParams model_params(const BasisSpec& basis) const;
};

RunConfig parse_config(const std::string& text);

const char* to_string(TaskKind t);
const char* to_string(OutputFormat f);
const char* to_string(RotorKind k);
const char* to_string(PhaseSign s);

}  // namespace floquetlab
