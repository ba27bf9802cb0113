#include <iostream>
#include <string>
#include <vector>

#include "cloneprob/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    return cloneprob::cli::run(args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return cloneprob::cli::kInputError;
  }
}
