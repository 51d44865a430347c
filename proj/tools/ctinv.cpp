#include <iostream>
#include <string>
#include <vector>

#include "ctinv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ctinv::cli::run(args, std::cout, std::cerr);
}
