#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace placeq::acceptance {

/** Outcome of one acceptance criterion. `detail` holds deterministic counts
 * only, so reports from identical runs compare byte for byte. */
struct Criterion {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Criterion> run_criteria(std::uint64_t seed, int bound);

/** Runs every criterion, printing one pass/fail line each, and returns
 * whether all passed. */
bool run_suite(std::uint64_t seed, int bound, std::ostream& out);

}  // namespace placeq::acceptance
