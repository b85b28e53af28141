#pragma once

#include <string_view>

#include "placeq/formula.hpp"

namespace placeq {

/** Parses the surface syntax into a formula.
 *
 * Variable sorts are inferred: predicate and valuation argument positions fix
 * them, comparisons adopt the sort of any variable already determined, and
 * comparisons left ambiguous default to the vector sort. Conflicting uses
 * raise sort_error; malformed text raises parse_error with a source span.
 */
Formula parse_formula(std::string_view text);

}  // namespace placeq
