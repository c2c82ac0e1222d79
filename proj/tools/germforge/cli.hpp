#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace germforge::cli {

/// Runs one invocation; args exclude the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

/// 0 success, 10 obstructed, 11 seed-required, 2 input error, 12 unsupported,
/// 1 internal error.
int exit_code(const std::string& verdict);

}  // namespace germforge::cli
