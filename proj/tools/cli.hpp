#ifndef RMTSHRINK_TOOLS_CLI_HPP
#define RMTSHRINK_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace rmtshrink::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kUsageError = 2,
    kIoError = 3,
    kFormatError = 4,
    kInfeasibleSigma = 5,
    kNumericalFailure = 6,
    kInvalidArgument = 7,
};

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`; the return value is the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rmtshrink::cli

#endif // RMTSHRINK_TOOLS_CLI_HPP
