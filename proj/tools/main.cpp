#include <iostream>
#include <string>
#include <vector>

#include "thinfilm/harness.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return thinfilm::run_cli(args, std::cout, std::cerr);
}
