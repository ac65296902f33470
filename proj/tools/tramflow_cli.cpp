#include <iostream>
#include <string>
#include <vector>

#include "tramflow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tramflow::run_cli(args, std::cout, std::cerr);
}
