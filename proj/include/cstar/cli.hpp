#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cstar::cli {

/// Runs one subcommand. args excludes the program name. Returns 0 on
/// success, 1 when a mathematical precondition fails (e.g. NotPositive),
/// 2 on malformed input, invalid flag values or usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cstar::cli
