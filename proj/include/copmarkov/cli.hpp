#pragma once

#include <iosfwd>

namespace copmarkov {

/**
 * @brief Entry point of the command-line tool.
 *
 * Subcommands: simulate, estimate, coverage, independence, loglik-grid.
 * Returns 0 on success and 1 with a diagnostic on `err` otherwise.
 */
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace copmarkov
