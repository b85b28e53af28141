#pragma once

#include "placeq/formula.hpp"

namespace placeq {

enum class TranslationDirection { OneToTwo, TwoToOne, OrderToL, LToOrder };

/** Rewrites surface predicates at finite places into valuation atoms:
 * L_p(x,y) becomes v_p(y) <= v_p(x), M_p(x,y,z) becomes
 * v_p(x) + v_p(y) = v_p(z), and Q_{n,p}(t) becomes P_n(v_p(t)).
 * Order atoms and equalities pass through. L or M at the real place
 * raise unsupported_error (use l_to_order for real L atoms).
 */
Formula to_two_sorted(const Formula& f);

/** Partial inverse of to_two_sorted for quantifier-free formulas without
 * value-sort variables. Each valuation atom must compare terms at a single
 * place and fall in one of the shapes the surface language can express:
 *
 *   v_p(t) + n <= v_p(t') + m   ->  L_p(p^m' t', p^n' t)
 *   v_p(t) + n  = v_p(t') + m   ->  both L_p directions
 *   v_p(t1) + v_p(t2) = v_p(t3) + c  ->  M_p with a power-of-p factor
 *   P_n(v_p(t) + c)             ->  Q_{n,p}(p^(c mod n) t)
 *   v_p(t) = oo                 ->  t = 0
 *
 * with integer bounds as powers of p. Anything else (for example a
 * coefficient 2 <= k < n on a valuation inside P_n) raises
 * unsupported_error.
 */
Formula to_one_sorted(const Formula& f);

/** Replaces order atoms by real-place L atoms: 0 <= t becomes
 * L_inf(t-1, t+1) and 0 < t its dual negation. */
Formula order_to_l(const Formula& f);

/** Replaces real-place L atoms by the four-way sign disjunction over order
 * atoms. M at the real place raises unsupported_error. */
Formula l_to_order(const Formula& f);

Formula translate(const Formula& f, TranslationDirection dir);

}  // namespace placeq
