#ifndef HMD_CLI_HPP
#define HMD_CLI_HPP

#include <string>
#include <vector>

namespace hmd::cli {

// Exit codes: 0 success, 2 usage/validation errors, 3 numerical
// non-convergence. On success `out` holds a JSON payload.
struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

CommandResult run(const std::vector<std::string>& args);

}  // namespace hmd::cli

#endif
