#pragma once

#include <iosfwd>
#include <string>

#include "circlekit/cli/config.hpp"

namespace circlekit {

struct TaskOutput {
  Json json;
  std::string csv;
};

// Runs one task. The output depends only on the configuration and the thread count.
TaskOutput execute_task(const RunConfig& cfg);

// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitConvergence = 2, kExitBudget = 3 };

// Full command-line entry point: argument parsing, caching, file emission, error mapping.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace circlekit
