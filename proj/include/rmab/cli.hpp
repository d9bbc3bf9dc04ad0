#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rmab {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAssertion = 3;

// args excludes the program name. Output files are written only by `run`
// and, when --out is given, by `bound`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rmab
