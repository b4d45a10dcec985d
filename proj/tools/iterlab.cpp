#include <iostream>
#include <string>
#include <vector>

#include "iterlab/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const iterlab::cli::CommandResult result = iterlab::cli::run(args);
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}
