#include <iostream>
#include <string>
#include <vector>

#include "mdrank/cli.hpp"

int main(int argc, char** argv) {
  return mdrank::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
