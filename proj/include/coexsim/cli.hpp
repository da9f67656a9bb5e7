#pragma once

#include <string>
#include <vector>

// Command-line front end. Subcommands: noise, fit, fwm, keyrate, maxdist.
// Exit codes: 0 success, 2 config/parse error, 3 numerical failure.

namespace coexsim::cli {

int run(const std::vector<std::string>& args);

}  // namespace coexsim::cli
