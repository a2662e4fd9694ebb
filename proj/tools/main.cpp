#include <iostream>
#include <string>
#include <vector>

#include "patrec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return patrec::cli::main(args, std::cout, std::cerr);
}
