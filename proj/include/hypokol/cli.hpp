#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypokol {

// Stable process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,   // verify or compare found a failing check
    kExitParse = 2,         // bad flags, unreadable or malformed input files
    kExitValidation = 3,    // problem parses but violates the solver's assumptions
    kExitNonConvergence = 4,
    kExitInternal = 5,
};

// Entry point of the hypokol tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hypokol
