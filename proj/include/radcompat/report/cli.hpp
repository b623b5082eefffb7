#pragma once

#include <iosfwd>

namespace radcompat::report {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitUsage = 2;

/// The `radcompat` command line: phantom | run | report.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace radcompat::report
