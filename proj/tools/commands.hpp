/**
 * @file commands.hpp
 * @brief Subcommand dispatch for the command line tool
 */
#pragma once

#include "run_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace clab::cli {

const std::vector<std::string>& command_names();

/// Runs one subcommand, writes its artifacts and returns the process exit code.
/// Messages go to `out`, errors to `err`.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out,
                std::ostream& err);

}  // namespace clab::cli
