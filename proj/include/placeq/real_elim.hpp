#pragma once

#include <vector>

#include "placeq/eval.hpp"
#include "placeq/formula.hpp"

namespace placeq {

/** Eliminates an existential vector variable from a conjunction of order
 * literals by Fourier-Motzkin.
 *
 * The literals may be order atoms (strict or not), positive vector
 * equalities, and arbitrary literals not mentioning x (passed through). A
 * positive equality involving x is solved and substituted. Otherwise each
 * atom 0 <= c*x + r (or strict) becomes a lower or upper bound on x by the
 * sign of c, every lower/upper pair combines into a bound comparison whose
 * strictness is the disjunction of the two, and one-sided systems vanish.
 * The result is equivalent to "exists x" over any ordered Q-vector space;
 * density makes no integrality adjustments necessary.
 *
 * Negated vector equalities involving x must be case-split by the caller
 * first; encountering one raises internal_error.
 */
Formula eliminate_vec_var_real(const std::vector<Lit>& conj, const Var& x);

/** Exact rational witness for x in conj under an assignment of the other
 * variables: the pinned value if an equality determines x, the midpoint of
 * the tightest bounds, a unit offset from a one-sided bound, or zero. The
 * returned value satisfies conj exactly; infeasibility raises
 * no_witness_error. */
Rat witness_real(const std::vector<Lit>& conj, const Var& x,
                 const Assignment& asg);

}  // namespace placeq
