#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace swsched::cli {

// Parses argv-style arguments (args[0] is the program name) and runs the
// subcommand. Returns 0 ok, 1 runtime or verification failure, 2 usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swsched::cli
