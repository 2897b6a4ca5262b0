#ifndef PRONY_TOOLS_CLI_HPP
#define PRONY_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace prony::cli {

enum ExitCode : int {
    Ok = 0,
    ConfigError = 1,
    ReconstructionFailed = 2,
    VerifyMismatch = 3,
};

/// Runs the `prony` command line with argv[0] omitted.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace prony::cli

#endif
