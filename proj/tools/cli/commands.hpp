#pragma once

#include <iosfwd>

namespace ldeform::cli {

enum ExitCode : int {
  kOk = 0,
  kObstruction = 2,
  kInputError = 3,
};

// Runs the ldeform command line; reports go to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ldeform::cli
