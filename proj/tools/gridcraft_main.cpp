#include <iostream>

#include "gridcraft/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gridcraft::run_cli(args, std::cout, std::cerr);
}
