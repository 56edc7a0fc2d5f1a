#pragma once

#include <iosfwd>

namespace bcnobs {

/// Exit codes of run_cli.
enum ExitCode : int {
    kExitPositive = 0,      // positive verdict or PROVED
    kExitNegative = 1,      // negative verdict (whole network only)
    kExitInconclusive = 2,  // decomposed run could not prove the property
    kExitError = 3,         // usage, input or limit errors
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bcnobs
