#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace thinfilm {

// Exit codes of the command-line harness.
inline constexpr int kExitOk = 0;           // command succeeded
inline constexpr int kExitGateOrAudit = 1;  // a required gate or audit failed
inline constexpr int kExitConfig = 2;       // configuration or usage error
inline constexpr int kExitNumerical = 3;    // non-finite state during stepping

// Runs the command-line interface in-process.  `args` excludes the program
// name; human-readable output goes to `out`, errors to `err`.  Returns the
// process exit code.  Subcommands:
//   check        evaluate certificates on the configured initial data
//   run          check, then integrate and audit the trajectory
//   sweep        map certificate values over configured parameter axes
//   convergence  time-step and bandwidth refinement study
//   verify       randomized self-verification suites
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace thinfilm
