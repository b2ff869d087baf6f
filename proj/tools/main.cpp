#include <vector>

#include "normsol/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return normsol::run_cli(args);
}
