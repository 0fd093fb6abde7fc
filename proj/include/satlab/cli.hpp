#pragma once

#include <string>
#include <vector>

namespace satlab::cli {

/// Exit codes: 0 success/realizable; 1 unrealizable or verification failure
/// (expected negative outcomes); 2 input error; 3 budget exceeded;
/// 4 internal error.
int run(const std::vector<std::string>& args);

}  // namespace satlab::cli
