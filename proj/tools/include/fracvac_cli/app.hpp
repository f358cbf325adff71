#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fracvac::cli {

/// Exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitIo = 4,
};

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace fracvac::cli
