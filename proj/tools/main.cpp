#include <iostream>
#include <string>
#include <vector>

#include "obtuse_walks/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return obtuse_walks::cli::dispatch(args, std::cout, std::cerr);
}
