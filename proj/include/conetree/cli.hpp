#pragma once

#include <string>
#include <vector>

namespace conetree {

struct CommandResult {
  int exit_code = 0;   // 0 ok, 1 validation failure, 2 usage error
  std::string out;
  std::string err;
};

// Runs one conetree invocation; argv excludes the program name.  Identical
// invocations produce byte-identical output.
CommandResult run_command(const std::vector<std::string>& argv);

}  // namespace conetree
