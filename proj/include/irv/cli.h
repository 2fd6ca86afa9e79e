#pragma once

#include <iosfwd>

namespace irv {

// Command-line front door: tabulate | predict | recount | replay | oracle | tree.
// Returns the process exit code: 0 success, 2 parse error, 3 validation
// error, 4 numerical failure, 5 unresolved tie.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace irv
