#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gldlmom::cli {

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 on success, 1 for bad input, 2 for numerical failures.
/// `in` is read when fit is given `--data -`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace gldlmom::cli
