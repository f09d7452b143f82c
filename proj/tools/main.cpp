#include <iostream>
#include <string>
#include <vector>

#include "latvar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return latvar::run_cli(args, std::cout, std::cerr);
}
