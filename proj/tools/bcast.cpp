#include <iostream>
#include <string>
#include <vector>

#include "bcast_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return bcast::cli::run(args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "bcast: internal error: " << e.what() << '\n';
    return 2;
  }
}
