#pragma once

#include <string>
#include <vector>

namespace polygaf {

// Full command-line driver: parses args (program name excluded), resolves the
// subcommand configuration (built-in defaults, then --config file, then
// same-named flags), runs the experiment, and writes its artifacts. Returns
// the process exit code: 0 on success, 2 on configuration or usage errors
// (including a missing output directory), 3 on numerical failures.
//
// Exposed as a function so tests can run whole invocations in-process and
// compare output bytes across worker counts.
int run_cli(const std::vector<std::string>& args);

}  // namespace polygaf
