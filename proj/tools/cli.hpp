#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace navrw::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kFragment = 3,
    kBudget = 4,
    kUnsupported = 5,
    kMismatch = 6,
};

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace navrw::cli
