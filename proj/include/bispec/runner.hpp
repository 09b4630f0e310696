#pragma once

// Batch front end: named experiment suites per command, JSON/CSV report
// emission, deterministic output for a fixed config and seed.

#include <filesystem>
#include <functional>

#include "bispec/config.hpp"

namespace bispec {

struct RunOutcome {
  int exit_code = 0;  // 0 pass, 1 check failed, 2 config/runtime error
  std::vector<std::string> files_written;
};

// Executes the configured command, writing report.json plus per-sweep CSV
// files under out_dir. `jobs` bounds the worker pool for independent
// (sector, z, R) items; 0 means hardware concurrency capped at 4.
RunOutcome run(const RunConfig& cfg, int jobs = 0);

}  // namespace bispec
