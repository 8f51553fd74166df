#include <string>
#include <vector>

#include "polygaf/cli.hpp"

int main(int argc, char** argv) {
  return polygaf::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
