#pragma once

#include <map>

#include "placeq/formula.hpp"
#include "placeq/place.hpp"

namespace placeq {

/** Eliminates a leading existential block of vector variables over a
 * quantifier-free body.
 *
 * Each branch of the body is normalized until the per-place parts are
 * independent: positive equalities are solved and substituted, valuation
 * arguments are case-split on vanishing, non-strict order atoms split into
 * edge and interior, and disequalities become finiteness atoms at a finite
 * place (or a sign disjunction when the signature has none). The variables
 * then leave one place at a time, innermost first, and the per-place
 * results are conjoined; this is exactly where approximation across places
 * enters. Blocks longer than max_block raise unsupported_error.
 */
Formula eliminate_block(const Formula& f, const Signature& sig,
                        int max_block = 6);

/** Quantifier elimination for arbitrary formulas: vector blocks as in
 * eliminate_block, value-sort quantifiers by integer elimination, universal
 * quantifiers through negation. The result is quantifier-free and
 * equivalent over Q; it may still mention valuations of free vector
 * variables. */
Formula eliminate_all(const Formula& f, const Signature& sig,
                      int max_block = 6);

/** Truth of a sentence. Validates against the signature first (M at the
 * real place and any undeclared place are refused), then eliminates all
 * quantifiers and reads off the ground value. */
bool decide(const Formula& f, const Signature& sig, int max_block = 6);

/** Exact rational witnesses for the leading existential vector variables of
 * a true sentence, outermost first.
 *
 * Each variable gets a per-place witness at the finite places, glued by a
 * congruence on p^(1 + separation) for each place, and the glued value is
 * steered into the real-place window along the residual lattice, refining
 * by powers of a prime outside the signature when the window is narrow.
 * Every candidate is verified by exact evaluation before it is returned.
 * Throws no_witness_error on a false sentence. */
std::map<Var, Rat> witness(const Formula& f, const Signature& sig,
                           int max_block = 6);

}  // namespace placeq
