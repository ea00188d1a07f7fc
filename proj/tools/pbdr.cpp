#include <iostream>
#include <string>
#include <vector>

#include "pbdr/cli.hpp"

int main(int argc, char** argv) {
  return pbdr::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
