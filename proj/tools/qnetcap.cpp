#include <iostream>
#include <string>
#include <vector>

#include "qnetcap/cli.hpp"

int main(int argc, char** argv) {
  return qnetcap::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
