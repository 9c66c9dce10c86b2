#include <iostream>
#include <string>
#include <vector>

#include "secblocks/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return secblocks::run_cli(args, std::cout, std::cerr);
}
