#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bwflow::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 2 input or configuration error, 3 mathematical
/// precondition violated, 1 anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace bwflow::cli
