#include <iostream>
#include <string>
#include <vector>

#include "tropikam/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tropikam::cli::run(args, std::cout, std::cerr);
}
