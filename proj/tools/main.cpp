#include <iostream>
#include <string>
#include <vector>

#include "talk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return talk::run_cli(args, std::cout, std::cerr);
}
