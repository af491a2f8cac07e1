#include <iostream>
#include <string>
#include <vector>

#include "dirclust/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dirclust::cli::run(args, std::cout, std::cerr);
}
