#include <iostream>

#include "fitevo/cli.hpp"

int main(int argc, char** argv) {
  return fitevo::run_cli(argc, argv, std::cout, std::cerr);
}
