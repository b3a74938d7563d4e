#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wlcae::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `wlcae` executable. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wlcae::cli
