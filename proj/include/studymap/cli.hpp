#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace studymap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

/// Runs the batch driver. `args` excludes the program name. Output that is
/// not redirected with -o goes to `out`; usage text and diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace studymap
