#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tropfit/error.hpp"

namespace tropfit::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kGateFailed = 1;
inline constexpr int kParse = 2;
inline constexpr int kContract = 3;
inline constexpr int kInfeasible = 4;
inline constexpr int kLimit = 5;

int exit_code(ErrorKind kind) noexcept;

// Runs the command line `args` (without the program name). The headline
// number goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tropfit::cli
