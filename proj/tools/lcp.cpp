#include "lcp/cli.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::map<std::string, std::string> env;
  if (const char* s = std::getenv("LCP_SEED")) env["LCP_SEED"] = s;
  return lcp::run_cli(args, env, std::cout, std::cerr);
}
