#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toeplab::cli {

enum ExitCode { kOk = 0, kInputError = 2, kNumericalError = 3 };

// Runs one command line (without the program name). Records go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace toeplab::cli
