#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hlap {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kNotConverged = 3, kCoercivityLost = 4 };

// Runs one subcommand; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hlap
