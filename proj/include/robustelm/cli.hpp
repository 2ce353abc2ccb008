#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robustelm::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kIo = 2, kSolver = 3, kUsage = 64, kData = 65 };

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robustelm::cli
