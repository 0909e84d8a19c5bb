#include <vector>

#include "spinbath/cli.hpp"

int main(int argc, char** argv) {
  return spinbath::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
