#include <iostream>

#include "noetherkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return noetherkit::cli::run(args, std::cout, std::cerr);
}
