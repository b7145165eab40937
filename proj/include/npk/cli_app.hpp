#pragma once

#include <string>
#include <vector>

namespace npk::cli {

/// Full command-line front end. Returns the process exit status:
/// 0 success, 1 invalid configuration, 2 numerical failure.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  ///< args including program name

}  // namespace npk::cli
