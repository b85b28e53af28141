#pragma once

#include "placeq/formula.hpp"

namespace placeq {

/** Case-splits every valuation application on its argument vanishing and
 * every free value variable on being oo, so that no surviving atom compares
 * a finite quantity with oo.
 *
 * Each split conjoins a guard (t = 0 or g = oo, or the negation) and
 * substitutes oo in the affected branch; atoms then fold. In the output the
 * only atoms mentioning oo are bare-variable guards g = oo.
 */
Formula infinity_split(const Formula& f);

/** Eliminates an existential integer value variable by Cooper's method.
 *
 * The input must be quantifier-free, in negation normal form, and free of
 * oo in atoms mentioning g; valuation applications are treated as opaque
 * integer unknowns (the caller is responsible for finiteness guards).
 * Returns a quantifier-free formula over the remaining symbols, equivalent
 * to "exists g in Z" over integer interpretations. Negated divisibilities
 * expand into disjunctions over nonzero residues; new moduli are lcm-based.
 */
Formula eliminate_val_var(const Formula& f, const Var& g);

/** Eliminates an existential value variable over the full value sort: the
 * g = oo branch, plus finiteness case-splits on every symbol sharing an
 * atom with g, feeding eliminate_val_var. */
Formula eliminate_val_exists(const Formula& f, const Var& g);

/** Truth of a variable-free value-sort formula. */
bool decide_ground_val(const Formula& f);

}  // namespace placeq
