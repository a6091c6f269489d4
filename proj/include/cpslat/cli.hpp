#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpslat::cli {

/// Run the command-line front end; `args` excludes the program name.
/// Exit codes: 0 success, 1 findings when a --fail-* flag asked for them,
/// 2 input or usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cpslat::cli
