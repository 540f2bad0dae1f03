#include <iostream>
#include <string>
#include <vector>

#include "sirshare/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sirshare::RunCli(args, std::cout, std::cerr);
}
