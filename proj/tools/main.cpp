#include <iostream>

#include "logderiv/cli.hpp"

int main(int argc, char** argv) {
  return logderiv::cli::run(argc, const_cast<const char* const*>(argv), std::cout, std::cerr);
}
