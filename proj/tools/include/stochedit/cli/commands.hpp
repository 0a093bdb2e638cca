#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stochedit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitTraining = 2;

// Runs the stochedit command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stochedit::cli
