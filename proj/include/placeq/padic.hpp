#pragma once

#include <optional>
#include <vector>

#include "placeq/eval.hpp"
#include "placeq/formula.hpp"

namespace placeq {

/** Spheres around centers at one finite place: mu[i] is a fresh value
 * variable standing for v_p(x - centers[i]). Centers are pairwise distinct
 * in canonical form and free of x; distances between centers enter formulas
 * as the value terms v_p(centers[i] - centers[j]), which fold to constants
 * when both centers are concrete. */
struct SphereSystem {
  Place p;
  Var x;
  std::vector<VecTerm> centers;
  std::vector<Var> mu;
};

/** A conjunction rewritten over sphere levels: the residual holds the input
 * literals with every v_p(c*x + t) replaced by mu_i + v_p(c). */
struct CenteredSystem {
  SphereSystem spheres;
  Formula residual;
};

/** Rewrites every occurrence of x under v_p into exact-sphere form using
 * v_p(c*x + t) = v_p(c) + v_p(x - (-t/c)). Coincident centers share one
 * sphere. Literals not mentioning x pass through; occurrences of x outside
 * a v_p argument at this place raise internal_error (the caller removes
 * them first). */
CenteredSystem normalize_to_centers(const std::vector<Lit>& conj, const Var& x,
                                    const Place& p);

/** One qualitative arrangement of the sphere levels mu_1..mu_n, all finite:
 * an ordered partition into clusters of equal level (lowest first), plus a
 * partition of the top cluster into classes of centers that agree one digit
 * deeper than the top level. */
struct ConfigPattern {
  std::vector<std::vector<int>> clusters;
  std::vector<std::vector<int>> top_blocks;
};

/** All patterns for n spheres. For each actual configuration of finite
 * levels exactly one pattern's realizability formula holds. */
std::vector<ConfigPattern> enumerate_patterns(int n);

/** The value-sort condition for some x to realize the pattern: equalities
 * and strict steps between clusters, the ultrametric law tying each lower
 * level to the center distances, depth demands inside the top cluster, and
 * the residue capacity bound (a pattern needing p or more distinct classes
 * in the top cluster is unrealizable, since x must occupy a class of its
 * own). */
Formula realizability(const SphereSystem& sys, const ConfigPattern& pattern);

/** Eliminates "exists x" from a conjunction of finite-place literals whose
 * x occurrences all sit under v_p. The result is a disjunction over the
 * exact-coincidence cases x = d_i and over all level patterns, with the
 * sphere levels discharged by value-sort elimination; it mentions only the
 * remaining variables and frozen v_p terms. */
Formula eliminate_vec_var_finite(const std::vector<Lit>& conj, const Var& x,
                                 const Place& p);

/** A rational x with v_p(x - centers[i]) exactly mu[i] for every i, centers
 * evaluated under asg. An infinite demand pins x to that center; otherwise
 * x = d* + r*p^(top level) for a residue r free of every top-cluster class.
 * Every demand is re-verified exactly; throws no_witness_error when the
 * demands are unrealizable. */
Rat witness_finite(const SphereSystem& sys, const std::vector<ValInt>& mu,
                   const Assignment& asg);

/** Bounded deterministic search for x satisfying the whole conjunction at
 * one finite place under asg: the evaluated centers first, then the grid
 * d_i + u*p^m with u running over one- and two-digit units and m over a
 * window derived from the constants of the system. Every candidate is
 * checked by exact evaluation. */
std::optional<Rat> witness_finite_conj(const std::vector<Lit>& conj,
                                       const Var& x, const Place& p,
                                       const Assignment& asg);

}  // namespace placeq
