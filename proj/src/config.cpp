#include "floquetlab/config.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace floquetlab {

namespace {

struct RawValue {
  std::string text;
  int line = 0;
  bool used = false;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

class RawConfig {
 public:
  explicit RawConfig(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "malformed section header '" + line + "'");
        section = trim(line.substr(1, line.size() - 2));
        if (section.empty()) fail(line_no, "empty section name");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + line + "'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) fail(line_no, "empty key");
      if (section.empty()) fail(line_no, "key '" + key + "' appears before any [section]");
      const std::string full = section + "." + key;
      if (entries_.count(full)) fail(line_no, "duplicate key '" + full + "'");
      entries_[full] = RawValue{value, line_no, false};
    }
  }

  std::optional<std::string> get(const std::string& full) {
    auto it = entries_.find(full);
    if (it == entries_.end()) return std::nullopt;
    it->second.used = true;
    return it->second.text;
  }

  int line_of(const std::string& full) const {
    auto it = entries_.find(full);
    return it == entries_.end() ? 0 : it->second.line;
  }

  double get_double(const std::string& full, double fallback) {
    const auto raw = get(full);
    if (!raw) return fallback;
    return parse_double(full, *raw);
  }

  std::optional<double> get_double_opt(const std::string& full) {
    const auto raw = get(full);
    if (!raw) return std::nullopt;
    return parse_double(full, *raw);
  }

  long get_long(const std::string& full, long fallback) {
    const auto raw = get(full);
    if (!raw) return fallback;
    return parse_long(full, *raw);
  }

  std::optional<long> get_long_opt(const std::string& full) {
    const auto raw = get(full);
    if (!raw) return std::nullopt;
    return parse_long(full, *raw);
  }

  void reject_unknown() const {
    for (const auto& [key, value] : entries_)
      if (!value.used) fail(value.line, "unknown key '" + key + "'");
  }

  void require(const char* full, const char* why) const {
    if (!entries_.count(full))
      throw std::invalid_argument("config: missing required key '" + std::string(full) + "' (" +
                                  why + ")");
  }

 private:
  double parse_double(const std::string& full, const std::string& raw) {
    try {
      size_t used = 0;
      const double v = std::stod(raw, &used);
      if (used != raw.size() || !std::isfinite(v)) throw std::invalid_argument("trailing junk");
      return v;
    } catch (const std::exception&) {
      fail(line_of(full), "unparsable value for '" + full + "': '" + raw + "'");
    }
  }

  long parse_long(const std::string& full, const std::string& raw) {
    try {
      size_t used = 0;
      const long v = std::stol(raw, &used);
      if (used != raw.size()) throw std::invalid_argument("trailing junk");
      return v;
    } catch (const std::exception&) {
      fail(line_of(full), "unparsable value for '" + full + "': '" + raw + "'");
    }
  }

  std::map<std::string, RawValue> entries_;
};

TaskKind parse_task(const std::string& name, int line) {
  if (name == "spectrum") return TaskKind::spectrum;
  if (name == "echo") return TaskKind::echo;
  if (name == "wigner") return TaskKind::wigner;
  if (name == "otoc") return TaskKind::otoc;
  if (name == "autocorr") return TaskKind::autocorr;
  if (name == "sff") return TaskKind::sff;
  if (name == "localization") return TaskKind::localization;
  if (name == "classical") return TaskKind::classical;
  if (name == "oracle-check") return TaskKind::oracle_check;
  fail(line, "unknown task name '" + name + "'");
}

}  // namespace

const char* to_string(TaskKind t) {
  switch (t) {
    case TaskKind::spectrum: return "spectrum";
    case TaskKind::echo: return "echo";
    case TaskKind::wigner: return "wigner";
    case TaskKind::otoc: return "otoc";
    case TaskKind::autocorr: return "autocorr";
    case TaskKind::sff: return "sff";
    case TaskKind::localization: return "localization";
    case TaskKind::classical: return "classical";
    case TaskKind::oracle_check: return "oracle-check";
  }
  return "?";
}

const char* to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

const char* to_string(RotorKind k) {
  switch (k) {
    case RotorKind::standard: return "standard";
    case RotorKind::linear: return "linear";
    case RotorKind::generic: return "generic";
  }
  return "?";
}

const char* to_string(PhaseSign s) { return s == PhaseSign::derived ? "derived" : "paper"; }

RunConfig parse_config(const std::string& text) {
  RawConfig raw(text);
  RunConfig cfg;

  if (const auto kind = raw.get("model.kind")) {
    if (*kind == "standard")
      cfg.kind = RotorKind::standard;
    else if (*kind == "linear")
      cfg.kind = RotorKind::linear;
    else if (*kind == "generic")
      cfg.kind = RotorKind::generic;
    else
      fail(raw.line_of("model.kind"), "unknown model kind '" + *kind + "'");
  }
  cfg.k_kick = raw.get_double("model.k_kick", 0.0);
  cfg.tau_free = raw.get_double_opt("model.tau_free");
  cfg.phi_free = raw.get_double_opt("model.phi_free");
  cfg.kick_profile_name = raw.get("model.kick_profile");
  if (const auto sign = raw.get("model.phase_sign")) {
    if (*sign == "derived")
      cfg.phase_sign = PhaseSign::derived;
    else if (*sign == "paper")
      cfg.phase_sign = PhaseSign::paper;
    else
      fail(raw.line_of("model.phase_sign"), "phase_sign must be 'derived' or 'paper'");
  }

  if (const auto c = raw.get_long_opt("basis.cutoff")) cfg.cutoff = static_cast<int>(*c);
  cfg.hbar_eff = raw.get_double("basis.hbar_eff", 1.0);

  raw.require("task.name", "every run needs a task");
  cfg.task = parse_task(*raw.get("task.name"), raw.line_of("task.name"));
  cfg.j_max = static_cast<int>(raw.get_long("task.j_max", 50));
  cfg.delta_k = raw.get_double_opt("task.delta_k");
  cfg.initial_n = static_cast<int>(raw.get_long("task.initial_n", 0));
  cfg.j_snapshot = static_cast<int>(raw.get_long("task.j", 0));
  if (const auto nt = raw.get_long_opt("task.n_theta")) cfg.n_theta = static_cast<int>(*nt);
  cfg.n_points = static_cast<int>(raw.get_long("task.n_points", 10000));
  if (const auto s = raw.get("task.seed")) {
    try {
      size_t used = 0;
      cfg.seed = std::stoull(*s, &used);
      if (used != s->size()) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
      fail(raw.line_of("task.seed"), "unparsable value for 'task.seed': '" + *s + "'");
    }
  }

  if (const auto p = raw.get("output.path")) cfg.output_path = *p;
  if (const auto f = raw.get("output.format")) {
    if (*f == "csv")
      cfg.format = OutputFormat::csv;
    else if (*f == "json")
      cfg.format = OutputFormat::json;
    else
      fail(raw.line_of("output.format"), "format must be 'csv' or 'json'");
  }

  raw.reject_unknown();

  // Cross-field requirements.
  auto missing = [&](const char* key, const char* why) {
    throw std::invalid_argument("config: missing required key '" + std::string(key) + "' (" +
                                why + ")");
  };
  if (cfg.kind == RotorKind::linear) {
    if (!cfg.phi_free) missing("model.phi_free", "linear kind needs the drift phase");
  } else {
    if (!cfg.tau_free) missing("model.tau_free", "standard/generic kinds need the free phase");
  }
  if (cfg.kind == RotorKind::generic) {
    if (!cfg.kick_profile_name)
      missing("model.kick_profile", "generic kind needs a kick profile (cos|sin)");
    if (*cfg.kick_profile_name != "cos" && *cfg.kick_profile_name != "sin")
      throw std::invalid_argument("config: model.kick_profile must be 'cos' or 'sin', got '" +
                                  *cfg.kick_profile_name + "'");
  }
  if (cfg.task == TaskKind::echo && !cfg.delta_k)
    missing("task.delta_k", "echo task needs the kick perturbation");
  if (cfg.task == TaskKind::oracle_check && cfg.kind != RotorKind::linear)
    throw std::invalid_argument("config: oracle-check requires model.kind = linear");
  if (cfg.hbar_eff <= 0.0) throw std::invalid_argument("config: basis.hbar_eff must be > 0");
  if (cfg.cutoff && *cfg.cutoff < 0)
    throw std::invalid_argument("config: basis.cutoff must be >= 0");
  if (cfg.k_kick < 0.0) throw std::invalid_argument("config: model.k_kick must be >= 0");
  if (cfg.j_max < 0) throw std::invalid_argument("config: task.j_max must be >= 0");
  return cfg;
}

BasisSpec RunConfig::basis_spec() const {
  const int n = cutoff ? *cutoff : default_cutoff(k_kick);
  return BasisSpec(n, hbar_eff);
}

ModelParams RunConfig::model_params(const BasisSpec& basis) const {
  ModelParams p;
  p.kind = kind;
  p.k_kick = k_kick;
  p.phase_sign = phase_sign;
  if (tau_free) p.tau_free = *tau_free;
  if (phi_free) p.phi_free = *phi_free;
  if (kind == RotorKind::generic) {
    size_t g = 4;
    while (g < 4 * static_cast<size_t>(basis.dim())) g <<= 1;
    p.kick_profile = (*kick_profile_name == "cos")
                         ? cosine_profile(k_kick, static_cast<int>(g))
                         : sine_profile(k_kick, static_cast<int>(g));
  }
  p.validate(basis);
  return p;
}

}  // namespace floquetlab
