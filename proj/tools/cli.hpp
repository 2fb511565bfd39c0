#pragma once

#include <ostream>

namespace v2vlos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `argv[0..argc)`. Data goes to --output or `out`;
/// summaries go to `out` when --output is a file, otherwise to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace v2vlos::cli
