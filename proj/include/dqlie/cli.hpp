#pragma once

// The `dqlie` command line: ik, fk, simulate, audit-energy, bench-fk and check.

#include <iosfwd>
#include <string>
#include <vector>

namespace dqlie {

/// Runs one command. `args` excludes the program name. Returns the process exit
/// code: 0 on success, 1 when a solve, audit or check fails, 2 on bad input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dqlie
