#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace richclub::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kInputError = 2,
    kConfigError = 3,
    kGeometryError = 4,
};

// Runs the command line `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace richclub::cli
