#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mlpgg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Entry point shared by the mlpgg binary and the tests. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlpgg::cli
