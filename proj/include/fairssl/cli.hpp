#pragma once

#include <ostream>

namespace fairssl {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2 };

/// Parses argv (argv[0] is the program name) and runs one subcommand:
/// run, compare, sweep, report or synth. Tables go to `out`, diagnostics to
/// `err`. Returns 0 on success, 1 on usage or config errors, 2 on runtime errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairssl
