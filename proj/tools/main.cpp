#include <iostream>

#include "dqlie/cli.hpp"

int main(int argc, char** argv) {
  return dqlie::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
