#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vecmass::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kSuccess = 0, kDomainError = 1, kUsageError = 2 };

/// Parses `args` (program name first) and runs one subcommand. Data goes to
/// `out` unless --out names a file, in which case a manifest is written next to it.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vecmass::cli
