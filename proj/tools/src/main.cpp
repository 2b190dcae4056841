#include <iostream>
#include <string>
#include <vector>

#include "flipcli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return flipcli::run_cli(args, std::cout, std::cerr);
}
