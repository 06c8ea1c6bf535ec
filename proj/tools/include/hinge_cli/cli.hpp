#pragma once

#include <iosfwd>

namespace hinge::cli {

enum ExitCode : int { kPass = 0, kGateFailed = 1, kConfigError = 2 };

/// Entry point behind the `hinge` executable. Diagnostics go to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace hinge::cli
