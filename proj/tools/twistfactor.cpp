#include <iostream>
#include <string>
#include <vector>

#include "twistfactor/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return twistfactor::run(args, std::cout, std::cerr);
}
