#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace prox {

// The `prox` command line; args excludes the program name. Returns the exit code.
int run_prox(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prox
