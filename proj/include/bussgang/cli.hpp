#pragma once

namespace bussgang {

/// Entry point for the `bussgang` command line tool.
/// Subcommands: sweep, verify, plot, preset list.
int run_cli(int argc, char** argv);

}  // namespace bussgang
