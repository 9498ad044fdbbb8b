#pragma once

namespace griff {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;        // bad input, validation, bad flags
inline constexpr int kExitIo = 2;           // missing or unreadable files
inline constexpr int kExitUnalignable = 3;  // aligner found no anchors

/// Runs the command-line tool. Diagnostics go to stderr; results go to the
/// --out file or stdout. Never throws.
int runCli(int argc, const char* const* argv);

}  // namespace griff
