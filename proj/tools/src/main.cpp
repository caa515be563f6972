#include <iostream>
#include <string>
#include <vector>

#include "bayescp_cli/cli.hpp"

int main(int argc, char** argv) {
  return bayescp::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
