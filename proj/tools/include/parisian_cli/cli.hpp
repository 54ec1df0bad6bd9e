#pragma once

#include <iosfwd>
#include <vector>
#include <string>

namespace parisian::cli {

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kConfigError = 2 };

const char* version();

// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parisian::cli
