#include <iostream>
#include <string>
#include <vector>

#include "aptscatter/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return aptscatter::cli::run(args, std::cout, std::cerr);
}
