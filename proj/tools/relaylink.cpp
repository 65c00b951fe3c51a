#include <iostream>
#include <string>
#include <vector>

#include "relaylink/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return relaylink::cli::run(args, std::cout, std::cerr);
}
