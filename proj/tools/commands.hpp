#ifndef WICKSELL_TOOLS_COMMANDS_HPP_
#define WICKSELL_TOOLS_COMMANDS_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace wicksell::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kIo = 3,
};

// Runs the command line `args` (without the program name), writing results
// to `out` unless --out is given and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace wicksell::cli

#endif  // WICKSELL_TOOLS_COMMANDS_HPP_
