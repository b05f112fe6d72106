#include <string>
#include <vector>

#include "qhatm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qhatm::cli::main(args);
}
