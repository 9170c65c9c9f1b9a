#include "lpdist/cli.hpp"

int main(int argc, char** argv) {
  return lpdist::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
