#include <string>
#include <vector>

#include "berryosc/cli.hpp"

int main(int argc, char** argv) {
  return berryosc::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
