#include <iostream>
#include <string>
#include <vector>

#include "bethedge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bethedge::cli::run(std::move(args), std::cout, std::cerr);
}
