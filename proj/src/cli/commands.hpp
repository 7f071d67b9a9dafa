#ifndef ZELF_CLI_COMMANDS_HPP
#define ZELF_CLI_COMMANDS_HPP

#include "cli/run_config.hpp"

namespace zelf_cli {

// Exit codes shared with the executable.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_numerical = 2;

int cmd_field(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_equilibria(const RunConfig& cfg);
int cmd_limits(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);

int run(const RunConfig& cfg);

} // namespace zelf_cli

#endif
