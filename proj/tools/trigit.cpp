#include <iostream>
#include <string>
#include <vector>

#include "trigit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return trigit::trigitMain(args, std::cout, std::cerr);
}
