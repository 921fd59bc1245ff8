#include <vector>

#include "qlrt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qlrt::run_cli(args);
}
