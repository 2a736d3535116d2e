#pragma once

#include <string>
#include <vector>

namespace levyobst {

/// Runs one CLI invocation (argv-style, without the program name).
/// Exit codes: 0 success, 2 validation error, 3 numerical-precondition
/// error, 4 failed verification check in strict mode.
int run_cli(const std::vector<std::string>& args);

}  // namespace levyobst
