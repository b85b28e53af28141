#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace placeq {

/** Runs one query: decide | eliminate | eval | witness | translate | gadget
 * | selftest. The formula comes from the trailing argument, or from `in`
 * when absent. Returns the process exit code: 0 success, 2 parse error,
 * 3 unsupported construct, 4 sort violation, 1 anything else (including a
 * witness request on a false sentence). */
int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err);

}  // namespace placeq
