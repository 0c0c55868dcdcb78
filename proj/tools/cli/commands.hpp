#pragma once

#include <iosfwd>

namespace sqznb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// Entry point of the `sqznb` command. JSON results go to `out`, diagnostics
// to `err`. Never throws; the return value is the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sqznb::cli
