#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace otto::cli {

// Runs one command line (args excludes the program name). Returns the exit
// status: 0 ok, 2 config error, 3 physics-domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace otto::cli
