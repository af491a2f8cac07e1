#ifndef DIRCLUST_CLI_HPP
#define DIRCLUST_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dirclust::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kComplexity = 3,
  kIo = 4,
  kPropertyFailed = 5,
};

/// Runs one command line (without the program name). Data goes to `out` or
/// to --output; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dirclust::cli

#endif  // DIRCLUST_CLI_HPP
