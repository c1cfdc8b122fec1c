#include <iostream>

#include "acsm/cli.hpp"

int main(int argc, char** argv) {
  return acsm::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
