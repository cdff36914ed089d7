#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace freeholo::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kNumerical = 3, kPropertyFailure = 4 };

/// Runs the freeholo command line. args excludes the program name. JSON goes to
/// out (or the --output file), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freeholo::cli
