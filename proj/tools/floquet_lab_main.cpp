#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "floquetlab/runner.hpp"
#include "floquetlab/threading.hpp"

int main(int argc, char** argv) {
  CLI::App app{"floquet-lab: kicked-rotor Floquet spectra and chaos diagnostics"};

  std::string config_path;
  std::string output_dir;
  std::string format;
  int threads = 0;
  long long seed = -1;

  app.add_option("config", config_path, "run configuration file")->required();
  app.add_option("--output", output_dir, "output directory (overrides [output] path)");
  app.add_option("--format", format, "csv or json (overrides [output] format)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads (fallback: FLOQUET_LAB_THREADS)");
  app.add_option("--seed", seed, "seed override for stochastic tasks");

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << R"({"error": "cannot open config file: )" << config_path << R"("})" << "\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  floquetlab::RunConfig cfg;
  try {
    cfg = floquetlab::parse_config(buffer.str());
  } catch (const std::exception& e) {
    std::cerr << R"({"error": ")" << e.what() << R"("})" << "\n";
    return 2;
  }

  if (!output_dir.empty()) cfg.output_path = output_dir;
  if (format == "csv") cfg.format = floquetlab::OutputFormat::csv;
  if (format == "json") cfg.format = floquetlab::OutputFormat::json;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

  if (threads <= 0) {
    if (const char* env = std::getenv("FLOQUET_LAB_THREADS")) threads = std::atoi(env);
  }
  floquetlab::set_thread_count(threads > 0 ? threads : 1);

  const floquetlab::RunResult result = floquetlab::run_task(cfg);
  if (!result.error_record.empty()) std::cerr << result.error_record << "\n";
  for (const auto& f : result.files_written) std::cout << f << "\n";
  return result.exit_code;
}
