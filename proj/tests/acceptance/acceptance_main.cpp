#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance/suite.hpp"

int main() {
  std::uint64_t seed = 0;
  if (const char* s = std::getenv("PLACEQ_SEED")) {
    try {
      seed = std::stoull(s);
    } catch (...) {
    }
  }
  return placeq::acceptance::run_suite(seed, 50, std::cout) ? 0 : 1;
}
