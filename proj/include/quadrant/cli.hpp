#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace qatlas::cli {

inline constexpr const char *kFormatVersion = "quadrant-atlas/1";

enum ExitCode : int {
  kPass = 0,
  kCheckFailed = 1,
  kInvalidArguments = 2,
  kSolverFailure = 3,
};

// args excludes the program name. Reports go to out, diagnostics to err.
int run(std::span<const std::string> args, std::ostream &out, std::ostream &err);

} // namespace qatlas::cli
