#pragma once

#include <iosfwd>

namespace snmf {

/// Entry point of the `snmf` command. Subcommands: factorize, benchmark,
/// verify, synth. Returns 0 on success (including runs that stop at the
/// iteration cap), 1 when a run fails or a verification suite finds a
/// violation, 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace snmf
