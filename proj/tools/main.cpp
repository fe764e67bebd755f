#include "oats/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return oats::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
