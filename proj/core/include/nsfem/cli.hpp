#pragma once

namespace nsfem {

// Entry point of the command-line driver (subcommands: run, converge-time,
// converge-space, validate, export). Returns the process exit status.
int cli_main(int argc, const char* const* argv);

} // namespace nsfem
