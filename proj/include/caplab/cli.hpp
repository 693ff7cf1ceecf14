#pragma once

#include <string>
#include <vector>

namespace caplab::cli {

// Batch front end. Exit codes: 0 success, 2 inequality/identity violation
// beyond tolerance, 1 usage or numerical failure.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace caplab::cli
