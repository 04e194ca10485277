#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fwsim {

inline constexpr const char* kVersion = "0.1.0";

// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitConfig = 4,
};

// Entry point behind the `fwsim` executable. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fwsim
