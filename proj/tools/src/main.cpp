#include <iostream>

#include "dualinspect_cli/commands.hpp"

int main(int argc, char** argv) {
  return dualinspect::cli::run_cli(argc, argv, std::cout, std::cerr);
}
