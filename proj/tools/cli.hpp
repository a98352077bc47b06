#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nilcrypt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitParameter = 3,
  kExitIo = 4,
  kExitIntegrity = 5,
};

/// Runs one command line (args excludes the program name). Never throws;
/// failures print a single line to `err` and return a nonzero ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace nilcrypt::cli
