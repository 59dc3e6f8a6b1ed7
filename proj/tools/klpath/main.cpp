#include <iostream>

#include "klpath/cli.hpp"

int main(int argc, char** argv) {
  return klpath::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
