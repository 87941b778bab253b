#pragma once

#include <string>
#include <vector>

namespace wmsketch::cli {

// Subcommands: train, eval, size, gen, app {explain, deltoid, pmi}.
// Exit status: 0 success, 2 usage error, 1 data error.
int run_command(const std::vector<std::string>& args);

}  // namespace wmsketch::cli
