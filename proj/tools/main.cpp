#include <string>
#include <vector>

#include "suffacts/cli.hpp"

int main(int argc, char** argv) {
  return suffacts::cli::run(std::vector<std::string>(argv, argv + argc));
}
