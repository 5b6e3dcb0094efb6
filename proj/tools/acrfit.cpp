#include <iostream>

#include "acr/cli.hpp"

int main(int argc, char** argv) {
  return acr::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
