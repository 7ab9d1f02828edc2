#pragma once

// The tropikam command-line front end, callable in-process.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tropikam::cli {

enum ExitCode : int { ok = 0, check_failed = 1, usage_error = 2 };

/// Runs one command. `args` excludes the program name. Human-readable output
/// goes to `out`, diagnostics to `err`. Returns 0 when every check passes,
/// 1 when a check fails, 2 on bad input or usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FNV-1a 64-bit hash, rendered as 16 hex digits in reports.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace tropikam::cli
