#pragma once

#include <string>
#include <vector>

#include "floquetlab/config.hpp"

namespace floquetlab {

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> files_written;
  std::string error_record;  // machine-readable JSON, empty on success
};

// Executes one task and writes its result files under config.output_path.
// Never throws: failures come back as a nonzero exit code plus a JSON error
// record.
RunResult run_task(const RunConfig& config);

}  // namespace floquetlab
