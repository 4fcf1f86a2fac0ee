#include <iostream>
#include <string>
#include <vector>

#include "uk/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return uk::cli::run(args, std::cout, std::cerr);
}
