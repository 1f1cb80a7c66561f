#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reprind {

enum ExitCode { kExitPass = 0, kExitVerdict = 1, kExitInput = 2, kExitCap = 3 };

/// The command-line tool; `args` excludes the program name. The text report
/// goes to `out`, diagnostics and timing to `err`.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reprind
