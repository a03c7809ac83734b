#include <iostream>
#include <string>
#include <vector>

#include "replicaflow/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return rflow::cli::dispatch(args, std::cout, std::cerr);
}
