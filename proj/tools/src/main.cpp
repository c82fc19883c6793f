#include <iostream>
#include <string>
#include <vector>

#include "trophy_cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return trophy::cli::run(args, std::cout, std::cerr);
}
