#pragma once

#include <ostream>

namespace fdshock::cli {

/// Exit codes of dispatch().
enum ExitCode : int { kSuccess = 0, kValidation = 1, kRuntime = 2 };

/// Parses argv, runs one subcommand and maps errors to exit codes:
/// 0 success, 1 validation error (bad arguments, config, input files),
/// 2 runtime failure (solver abort, filesystem error, failed criterion).
/// Progress goes to `err`; `out` only receives usage and version text.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fdshock::cli
