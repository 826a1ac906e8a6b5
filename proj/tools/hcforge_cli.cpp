#include <string>
#include <vector>

#include "hcforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hcforge::run_cli(args);
}
