#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace necklace {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_cap = 2, exit_malformed = 3 };

/// Runs one `necklace` invocation; args excludes the program name. Reports
/// go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace necklace
