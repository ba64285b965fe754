#pragma once

#include <iosfwd>

namespace hycal {

// Entry point of the `hycal` command line tool. Subcommands: synth, run,
// sweep, diagnose, report. Returns 0 on success, 1 on validation or usage
// errors and 2 on I/O errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hycal
