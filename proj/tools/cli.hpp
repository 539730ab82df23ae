#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pstt::cli {

enum ExitStatus : int {
    Success = 0,
    UserError = 1,         // parse, type or validation failure, bad flags
    InvariantBreach = 2,  // a library self-check failed
};

/// Run the command line `args` (without the program name). Output is
/// deterministic for identical inputs and seed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pstt::cli
