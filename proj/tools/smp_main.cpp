#include <iostream>
#include <string>
#include <vector>

#include "smp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return smp::cli_main(args, std::cout, std::cerr);
}
