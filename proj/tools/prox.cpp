#include <iostream>

#include "prox/app.hpp"

int main(int argc, char** argv) {
  return prox::run_prox(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
