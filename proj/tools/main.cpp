#include <iostream>
#include <string>
#include <vector>

#include "cscpct/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cscpct::run_cli(args, std::cout, std::cerr);
}
