#include <iostream>

#include "treepat/cli.hpp"

int main(int argc, char** argv) {
  return treepat::runCommand(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
