#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latvar {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitSuiteFailure = 1, kExitUsage = 2, kExitGuard = 3 };

/// Runs the tool on argv-style arguments (args[0] is the program name).
/// Reports go to `out` (or --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latvar
