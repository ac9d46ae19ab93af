#include <iostream>
#include <string>
#include <vector>

#include "visang/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return visang::cli::run(args, std::cout, std::cerr).exit_code;
}
