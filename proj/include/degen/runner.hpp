#pragma once

#include <string>

#include "degen/config.hpp"
#include "degen/error.hpp"
#include "json.hpp"

namespace degen {

/// 0 success, 2 validation, 3 numerical instability, 4 non-convergence, 5 divergent norm.
int exit_code(ErrorKind kind);

struct RunResult {
  int exit_code = 0;
  std::string message;
  nlohmann::json summary;
};

/// Executes config.experiment and writes report.csv, summary.json and manifest.json
/// (plus trajectory/ for evolve and picard) under config.output. Failures still
/// write the partial report, flagged in the summary.
RunResult run(const RunConfig& config);

}  // namespace degen
