#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace legsynth {

enum ExitCode : int {
    kExitFeasible = 0,
    kExitError = 1,
    kExitInfeasible = 2,
    kExitNoFeasible = 3,
};

/// Entry point of the command-line tool.  `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace legsynth
