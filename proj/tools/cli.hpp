#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dhdiag::cli {

inline constexpr int kExitGreen = 0;
inline constexpr int kExitYellow = 1;
inline constexpr int kExitRed = 2;
inline constexpr int kExitFailure = 3;

// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dhdiag::cli
