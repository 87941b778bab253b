#include <string>
#include <vector>

#include "wmsketch/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wmsketch::cli::run_command(args);
}
