#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace meshcoop::cli {

// Entry point of the `meshcoop` tool; `args` excludes the program name.
// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace meshcoop::cli
