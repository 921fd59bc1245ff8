#pragma once

#include <string>
#include <vector>

namespace qlrt {

// Full command-line entry point. Returns the process exit status: 0 success,
// 1 usage error, 2 configuration/data error, 3 numerical-quality error.
int run_cli(const std::vector<std::string>& args);

}  // namespace qlrt
