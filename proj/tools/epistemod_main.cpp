#include <iostream>
#include <vector>

#include "epistemod/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return epistemod::cli::run_command(std::move(args), std::cout, std::cerr);
}
