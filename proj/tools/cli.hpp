#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idtkit::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2 };

// Runs one `idtkit` invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idtkit::cli
