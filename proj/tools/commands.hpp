#pragma once

#include <iosfwd>

namespace nlch::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

/// Entry point of the `nlch` tool. Normal output goes to `out`; failures
/// print a single `error: kind=... message="..."` line to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlch::cli
