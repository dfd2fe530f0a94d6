#pragma once

#include <ostream>

namespace fsforms::cli {

enum ExitCode : int {
    ok = 0,
    failed = 1,        // a case or check did not hold
    usage_error = 2,   // unknown suite or experiment, bad flags or config
    internal_error = 3,
    degenerate = 4,    // connection could not be built
};

/// Entry point of the fsforms command; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fsforms::cli
