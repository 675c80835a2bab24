#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dasep::cli {

enum ExitCode : int {
  kOk = 0,
  kToleranceFailure = 1,
  kUsageError = 2,
  kIoError = 3,
};

/// Runs one subcommand.  `args` excludes the program name.  Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dasep::cli
