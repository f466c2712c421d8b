#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace statlab {

/// Entry point of the statlab tool. args excludes the program name.
/// Returns 0 when every verdict passes, 2 on configuration errors and 1 otherwise.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace statlab
