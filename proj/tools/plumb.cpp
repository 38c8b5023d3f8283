#include <string>
#include <vector>

#include "plumbing/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return plumbing::cli::run(args);
}
