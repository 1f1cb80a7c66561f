#include <iostream>

#include "reprind/cli/app.hpp"

int main(int argc, char** argv) {
  return reprind::runCli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
