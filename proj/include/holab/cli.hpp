#pragma once

namespace holab {

// Parses flags, dispatches the subcommand and maps the outcome onto the
// exit contract: 0 all checks pass, 1 a check failed, 2 usage or data
// error.  Reports go to stdout as JSON once the command has finished, so a
// run that exits 2 writes no report at all.
int run_cli(int argc, const char* const* argv);

}  // namespace holab
