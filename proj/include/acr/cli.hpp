#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace acr {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// Runs the acrfit command line; args[0] is the program name. Messages go to
// out, diagnostics to err. With ACR_CI=1 in the environment, randomized
// commands refuse to run without --seed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace acr
