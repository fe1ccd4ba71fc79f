#include <iostream>
#include <string>
#include <vector>

#include "rnlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rnlab::run_cli(args, std::cout, std::cerr);
}
