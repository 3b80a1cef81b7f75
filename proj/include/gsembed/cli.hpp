#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gsembed::cli {

/// Exit codes: 0 success, 2 inconclusive verdict, 1 error.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kInconclusive = 2;

/// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gsembed::cli
