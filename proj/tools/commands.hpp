#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace inexa::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kUnfit = 3,
  kInadmissible = 4,
};

// Entry point of the `inexa` tool; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Bank account opening example as an OCEL document (no abstractions applied).
std::string demo_log();

}  // namespace inexa::cli
