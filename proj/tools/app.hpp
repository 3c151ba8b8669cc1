#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvam::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kConfigError = 2,
  kInfeasible = 3,
  kSearchFailed = 4,
};

// Entry point of the `mvam` tool: subcommands sweep, evolve, simulate, report.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvam::cli
