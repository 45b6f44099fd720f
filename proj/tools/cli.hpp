#ifndef BLMAC_TOOLS_CLI_HPP
#define BLMAC_TOOLS_CLI_HPP

namespace blmac::cli {

// Parses argv, dispatches the subcommand, writes outputs. Returns 0 on
// success, 1 on usage errors, 2 when the numerics fail to converge.
int run_cli(int argc, const char* const* argv);

}  // namespace blmac::cli

#endif
