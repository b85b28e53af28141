#pragma once

#include <map>

#include "placeq/formula.hpp"
#include "placeq/place.hpp"

namespace placeq {

struct ValidateOptions {
  /** Direct evaluation may use M at the real place; the decision pipeline
   * must refuse it (it defines multiplication). */
  bool allow_real_m = false;
};

/** Checks that every predicate and valuation names a declared place, that M
 * and Q appear only at places carrying them, and that each variable is used
 * at a single sort. Returns the sorts of the free variables. */
std::map<Var, Sort> validate(const Formula& f, const Signature& sig,
                             const ValidateOptions& opts = {});

}  // namespace placeq
