#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sparsalloc::cli {

// Runs the tool on `args` (program name excluded) and returns the exit code:
// 0 success, 1 I/O or file-format error, 2 usage error, 3 domain or shape
// error, 4 validation failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparsalloc::cli
