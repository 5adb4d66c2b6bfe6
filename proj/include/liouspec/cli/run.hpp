#ifndef LIOUSPEC_CLI_RUN_HPP_
#define LIOUSPEC_CLI_RUN_HPP_

namespace liouspec::cli {

// Parses argv, loads the config, dispatches the subcommand and maps
// exceptions to exit codes (1 config, 2 numerical, 3 I/O).
int run_cli(int argc, char** argv);

}  // namespace liouspec::cli

#endif  // LIOUSPEC_CLI_RUN_HPP_
