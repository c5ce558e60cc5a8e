#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace resonwave::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kConfigError = 2,
  kNumericalError = 3,
};

/// argv without the program name: {command, --config, PATH, ...}.
/// Human-readable progress goes to `out`; errors are written to `err` as a
/// one-line JSON object.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(const std::vector<std::string>& args);

}  // namespace resonwave::cli
