// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specinv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Version of the JSON reports written by `separate`, `stream` and `metrics`.
inline constexpr int kReportSchemaVersion = 1;

/// Parses `args` (without the program name) and runs the subcommand.
/// Returns the process exit code; messages go to `out` and `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specinv::cli
