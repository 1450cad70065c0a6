#include <iostream>
#include <string>
#include <vector>

#include "coupon/cli.hpp"

int main(int argc, char** argv) {
  return coupon::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
