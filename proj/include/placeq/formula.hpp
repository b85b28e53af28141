#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "placeq/term.hpp"

namespace placeq {

// Atoms. Vector equalities and order atoms are kept one-sided against 0.

/** t = 0 */
struct VecEqAtom {
  VecTerm t;
  bool operator==(const VecEqAtom& o) const { return t == o.t; }
  bool operator<(const VecEqAtom& o) const { return t < o.t; }
};

/** strict ? 0 < t : 0 <= t (archimedean order) */
struct OrdAtom {
  VecTerm t;
  bool strict = false;
  bool operator==(const OrdAtom& o) const {
    return strict == o.strict && t == o.t;
  }
  bool operator<(const OrdAtom& o) const {
    if (strict != o.strict) return strict < o.strict;
    return t < o.t;
  }
};

/** lhs <= rhs on the value sort (oo greatest) */
struct ValLeAtom {
  ValTerm lhs, rhs;
  bool operator==(const ValLeAtom& o) const {
    return lhs == o.lhs && rhs == o.rhs;
  }
  bool operator<(const ValLeAtom& o) const {
    if (!(lhs == o.lhs)) return lhs < o.lhs;
    return rhs < o.rhs;
  }
};

/** lhs = rhs on the value sort */
struct ValEqAtom {
  ValTerm lhs, rhs;
  bool operator==(const ValEqAtom& o) const {
    return lhs == o.lhs && rhs == o.rhs;
  }
  bool operator<(const ValEqAtom& o) const {
    if (!(lhs == o.lhs)) return lhs < o.lhs;
    return rhs < o.rhs;
  }
};

/** P_n(t): n divides t, satisfied by oo; n >= 1 */
struct DivAtom {
  Int n;
  ValTerm t;
  bool operator==(const DivAtom& o) const { return n == o.n && t == o.t; }
  bool operator<(const DivAtom& o) const {
    if (n != o.n) return n < o.n;
    return t < o.t;
  }
};

/** |x|_place <= |y|_place */
struct LAtom {
  Place place;
  VecTerm x, y;
  bool operator==(const LAtom& o) const {
    return place == o.place && x == o.x && y == o.y;
  }
  bool operator<(const LAtom& o) const {
    if (place != o.place) return place < o.place;
    if (!(x == o.x)) return x < o.x;
    return y < o.y;
  }
};

/** |x * y|_place = |z|_place */
struct MAtom {
  Place place;
  VecTerm x, y, z;
  bool operator==(const MAtom& o) const {
    return place == o.place && x == o.x && y == o.y && z == o.z;
  }
  bool operator<(const MAtom& o) const {
    if (place != o.place) return place < o.place;
    if (!(x == o.x)) return x < o.x;
    if (!(y == o.y)) return y < o.y;
    return z < o.z;
  }
};

/** P_n(v_place(t)); n >= 1, place finite */
struct QAtom {
  Place place;
  Int n;
  VecTerm t;
  bool operator==(const QAtom& o) const {
    return place == o.place && n == o.n && t == o.t;
  }
  bool operator<(const QAtom& o) const {
    if (place != o.place) return place < o.place;
    if (n != o.n) return n < o.n;
    return t < o.t;
  }
};

using Atom = std::variant<VecEqAtom, OrdAtom, ValLeAtom, ValEqAtom, DivAtom,
                          LAtom, MAtom, QAtom>;

std::string atom_str(const Atom& a);
Atom atom_subst_vec(const Atom& a, const Var& x, const VecTerm& by);
Atom atom_subst_val(const Atom& a, const Var& g, const ValTerm& by);
void atom_vars(const Atom& a, std::set<Var>& vec, std::set<Var>& val);

/** Immutable formula handle over a shared tree.
 *
 * Builders fold ground subformulas: an atom whose terms are constant becomes
 * True/False, conjunction and disjunction absorb their units. And/Or are
 * n-ary and flattened.
 */
class Formula {
 public:
  enum class Kind { True, False, Atm, Not, And, Or, Implies, Exists, Forall };

  Formula() : Formula(tru()) {}

  static Formula tru();
  static Formula fls();
  static Formula boolean(bool b) { return b ? tru() : fls(); }
  static Formula atom(Atom a);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> kids);
  static Formula disj(std::vector<Formula> kids);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula exists(const Var& x, Sort s, Formula body);
  static Formula forall(const Var& x, Sort s, Formula body);
  static Formula quant(Kind k, const Var& x, Sort s, Formula body);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  const Atom& get_atom() const;
  const std::vector<Formula>& kids() const;
  const Formula& kid(std::size_t i = 0) const;
  const Var& qvar() const;
  Sort qsort() const;

  bool is_qf() const;
  /** Structural equality (no alpha-renaming). */
  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  /** Rendering in the surface syntax (see printer.cpp). */
  std::string str() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Formula node(Kind k, std::vector<Formula> kids, Var var, Sort sort);
  static Formula atom_node(Atom a);
  static Formula junction(Kind k, std::vector<Formula> kids);
  std::shared_ptr<const Node> n_;
};

/** A literal: an atom or its negation. */
struct Lit {
  bool neg = false;
  Atom atom;
};

/** Returns the literal view if f is Atm or Not(Atm). */
std::optional<Lit> as_literal(const Formula& f);
Formula lit_formula(const Lit& l);

/** Negation normal form: no Implies, Not only directly on atoms.
 * Order atoms absorb negation (not (0 <= t) becomes 0 < -t). */
Formula to_nnf(const Formula& f);

/** Disjunctive branches of a quantifier-free NNF formula. Each branch is a
 * list of literals; branches with a directly contradictory pair are dropped.
 * Returns an empty list iff the formula is False. */
std::vector<std::vector<Lit>> dnf_branches(const Formula& f);

Formula branch_formula(const std::vector<Lit>& branch);

/** Capture-avoiding substitutions. */
Formula subst_vec(const Formula& f, const Var& x, const VecTerm& by);
Formula subst_val(const Formula& f, const Var& g, const ValTerm& by);

/** Replaces a valuation application by a value term in every atom. The
 * replacement must not mention bound variables of f. */
Formula subst_vapp(const Formula& f, const VApp& ap, const ValTerm& by);

/** Rebuilds f with every atom replaced by fn(atom). The images must not
 * mention variables that are bound in f. */
Formula map_atoms(const Formula& f,
                  const std::function<Formula(const Atom&)>& fn);

/** Free variables by sort. A variable appearing at both sorts raises
 * sort_error. */
void free_vars(const Formula& f, std::set<Var>& vec, std::set<Var>& val);

/** Structural equality modulo renaming of bound variables. */
bool alpha_equal(const Formula& f, const Formula& g);

/** Places mentioned by predicates and valuation applications. */
std::set<Place> formula_places(const Formula& f);

/** Fresh variable name not in taken (base, base', base'', ... scheme). */
Var fresh_var(const Var& base, const std::set<Var>& taken);

}  // namespace placeq
