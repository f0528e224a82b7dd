#include <cstdlib>
#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) {
  return duetrank::run(argc, argv, std::cout, std::cerr, std::getenv("DUETRANK_SEED"));
}
