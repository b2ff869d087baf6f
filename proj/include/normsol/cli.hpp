#pragma once

#include <string>
#include <vector>

namespace normsol {

/// Runs the command-line interface. Exit codes: 0 success, 2 configuration
/// or parse error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace normsol
