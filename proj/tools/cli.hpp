#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crn::cli {

enum ExitCode { kOk = 0, kInputError = 2, kNumericalError = 3, kPropertyFailure = 4 };

/// Runs `crn <args...>`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crn::cli
