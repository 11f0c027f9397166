#pragma once

#include <iosfwd>

namespace fbmlab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `fbmlab` tool. Subcommands: sample, integrate, bounds,
/// diagnose, experiment, verify, report. Returns 0 on success, 1 when a check
/// fails or a computation aborts, 2 on usage or configuration errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fbmlab
