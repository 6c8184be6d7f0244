#pragma once

#include <ostream>

namespace fitevo {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
};

/// Entry point of the `fitevo` tool: analyze | simulate | verify | scenario.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fitevo
