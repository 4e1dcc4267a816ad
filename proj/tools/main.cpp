#include <iostream>

#include "acarm/cli.hpp"

int main(int argc, char** argv) {
  return acarm::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
