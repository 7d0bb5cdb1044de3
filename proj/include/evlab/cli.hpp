#pragma once

#include <iosfwd>

namespace evlab::cli {

// Full command-line entry point; out gets the structured result, err the
// diagnostics.  Returns the process exit code (0 ok, 1 check failure,
// 2 usage error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace evlab::cli
