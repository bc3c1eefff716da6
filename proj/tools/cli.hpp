#pragma once

#include <string>
#include <vector>

namespace levelsurf::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_io = 2,
    exit_parse = 3,
    exit_validation = 4,
    exit_solver = 5,
};

/// Runs one command; args excludes the program name. Errors are reported on
/// stderr and mapped to the exit codes above.
int run(const std::vector<std::string>& args);

} // namespace levelsurf::cli
