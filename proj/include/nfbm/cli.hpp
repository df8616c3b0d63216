#pragma once

#include <iosfwd>

namespace nfbm {

// Entry point of the command-line tool; returns the process exit code
// (0 ok, 1 I/O, 2 validation, 3 numerical failure).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nfbm
