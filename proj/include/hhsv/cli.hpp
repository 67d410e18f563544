#pragma once

namespace hhsv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv, runs one subcommand and returns the process exit code.
int run(int argc, char** argv);

}  // namespace hhsv::cli
