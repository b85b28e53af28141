#include "placeq/combine.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "placeq/errors.hpp"
#include "placeq/eval.hpp"
#include "placeq/interpret.hpp"
#include "placeq/padic.hpp"
#include "placeq/presburger.hpp"
#include "placeq/real_elim.hpp"
#include "placeq/validate.hpp"

namespace placeq {

namespace mp = boost::multiprecision;

namespace {

bool atom_mentions_vec(const Atom& a, const Var& x) {
  return std::visit(
      [&](const auto& at) -> bool {
        using T = std::decay_t<decltype(at)>;
        if constexpr (std::is_same_v<T, VecEqAtom> || std::is_same_v<T, OrdAtom>)
          return at.t.mentions(x);
        else if constexpr (std::is_same_v<T, ValLeAtom> ||
                           std::is_same_v<T, ValEqAtom>)
          return at.lhs.mentions_vec(x) || at.rhs.mentions_vec(x);
        else if constexpr (std::is_same_v<T, DivAtom>)
          return at.t.mentions_vec(x);
        else
          throw internal_error("surface atom inside the elimination pipeline");
      },
      a);
}

void x_places(const ValTerm& t, const Var& x, std::set<Place>& out) {
  for (const auto& entry : t.vapp_coeffs())
    if (entry.first.arg.mentions(x)) out.insert(entry.first.place);
}

std::set<Place> atom_x_places(const Atom& a, const Var& x) {
  std::set<Place> ps;
  if (const auto* le = std::get_if<ValLeAtom>(&a)) {
    x_places(le->lhs, x, ps);
    x_places(le->rhs, x, ps);
  } else if (const auto* eq = std::get_if<ValEqAtom>(&a)) {
    x_places(eq->lhs, x, ps);
    x_places(eq->rhs, x, ps);
  } else if (const auto* dv = std::get_if<DivAtom>(&a)) {
    x_places(dv->t, x, ps);
  }
  return ps;
}

/* A branch after normalization: either x is pinned to a term, or every
   literal mentioning x lives in exactly one place bucket. */
struct XBranch {
  std::optional<VecTerm> pin;
  std::vector<Lit> rest;  // pin case: the other literals, unsubstituted
  std::map<Place, std::vector<Lit>> fin;
  std::vector<Lit> real_lits;
  std::vector<Lit> residual;
};

/* Places whose valuations apply to t somewhere in the branch; a vanishing
   guard for t must stay attached to each of them. */
std::set<Place> guard_places(const std::vector<Lit>& lits, const VecTerm& t,
                             const Var& x) {
  std::set<Place> ps;
  for (const Lit& l : lits)
    std::visit(
        [&](const auto& at) {
          using T = std::decay_t<decltype(at)>;
          if constexpr (std::is_same_v<T, ValLeAtom> ||
                        std::is_same_v<T, ValEqAtom>) {
            for (const auto& e : at.lhs.vapp_coeffs())
              if (e.first.arg == t) ps.insert(e.first.place);
            for (const auto& e : at.rhs.vapp_coeffs())
              if (e.first.arg == t) ps.insert(e.first.place);
          } else if constexpr (std::is_same_v<T, DivAtom>) {
            for (const auto& e : at.t.vapp_coeffs())
              if (e.first.arg == t) ps.insert(e.first.place);
          }
        },
        l.atom);
  (void)x;
  return ps;
}

void normalize_x(std::vector<Lit> lits, const Var& x, const Signature& sig,
                 std::vector<XBranch>& out) {
  for (Lit& l : lits)
    if (l.neg)
      if (const auto* od = std::get_if<OrdAtom>(&l.atom))
        l = Lit{false, OrdAtom{od->t.scaled(Rat(-1)), !od->strict}};

  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (lits[i].neg) continue;
    const auto* eq = std::get_if<VecEqAtom>(&lits[i].atom);
    if (!eq || !eq->t.mentions(x)) continue;
    Rat c = eq->t.coeff(x);
    XBranch b;
    b.pin = (eq->t - VecTerm::var(x).scaled(c)).scaled(Rat(-1) / c);
    for (std::size_t j = 0; j < lits.size(); ++j)
      if (j != i) b.rest.push_back(lits[j]);
    out.push_back(std::move(b));
    return;
  }

  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (lits[i].neg) continue;
    const auto* od = std::get_if<OrdAtom>(&lits[i].atom);
    if (!od || od->strict || !od->t.mentions(x)) continue;
    auto edge = lits;
    edge[i] = Lit{false, VecEqAtom{od->t}};
    auto open = lits;
    open[i] = Lit{false, OrdAtom{od->t, true}};
    normalize_x(std::move(edge), x, sig, out);
    normalize_x(std::move(open), x, sig, out);
    return;
  }

  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (!lits[i].neg) continue;
    const auto* eq = std::get_if<VecEqAtom>(&lits[i].atom);
    if (!eq || !eq->t.mentions(x)) continue;
    std::set<Place> ps = guard_places(lits, eq->t, x);
    if (ps.empty())
      for (const Place& p : sig.s0())
        if (p.is_finite()) {
          ps.insert(p);
          break;
        }
    if (ps.empty()) {
      auto apos = lits;
      apos[i] = Lit{false, OrdAtom{eq->t, true}};
      auto aneg = lits;
      aneg[i] = Lit{false, OrdAtom{eq->t.scaled(Rat(-1)), true}};
      normalize_x(std::move(apos), x, sig, out);
      normalize_x(std::move(aneg), x, sig, out);
      return;
    }
    VecTerm t = eq->t;
    auto it = ps.begin();
    lits[i] = Lit{true, ValEqAtom{ValTerm::vapp(*it, t), ValTerm::infinity()}};
    for (++it; it != ps.end(); ++it)
      lits.push_back(
          Lit{true, ValEqAtom{ValTerm::vapp(*it, t), ValTerm::infinity()}});
  }

  XBranch b;
  for (const Lit& l : lits) {
    if (!atom_mentions_vec(l.atom, x)) {
      b.residual.push_back(l);
      continue;
    }
    if (std::holds_alternative<OrdAtom>(l.atom)) {
      b.real_lits.push_back(l);
      continue;
    }
    if (std::holds_alternative<VecEqAtom>(l.atom))
      throw internal_error("equality left over after branch normalization");
    std::set<Place> ps = atom_x_places(l.atom, x);
    if (ps.size() != 1)
      throw unsupported_error(
          "atom compares valuations of one variable at different places");
    b.fin[*ps.begin()].push_back(l);
  }
  out.push_back(std::move(b));
}

/** An atom with no variables left: every remaining vapp carries a variable
 * argument (constant arguments fold at term construction), so emptiness of
 * the coefficient maps is exact. */
bool atom_ground(const Atom& a) {
  return std::visit(
      [](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, VecEqAtom> || std::is_same_v<T, OrdAtom>) {
          return node.t.is_constant();
        } else if constexpr (std::is_same_v<T, ValLeAtom> ||
                             std::is_same_v<T, ValEqAtom>) {
          return node.lhs.var_coeffs().empty() &&
                 node.lhs.vapp_coeffs().empty() &&
                 node.rhs.var_coeffs().empty() &&
                 node.rhs.vapp_coeffs().empty();
        } else if constexpr (std::is_same_v<T, DivAtom>) {
          return node.t.var_coeffs().empty() && node.t.vapp_coeffs().empty();
        } else if constexpr (std::is_same_v<T, LAtom>) {
          return node.x.is_constant() && node.y.is_constant();
        } else if constexpr (std::is_same_v<T, MAtom>) {
          return node.x.is_constant() && node.y.is_constant() &&
                 node.z.is_constant();
        } else {
          return node.t.is_constant();
        }
      },
      a);
}

/** Bottom-up structural cleanup: folds ground atoms, flattens junctions,
 * drops duplicate and absorbed kids, cancels complementary pairs, and
 * removes vacuous quantifiers. Elimination repeatedly negates and re-expands
 * its own output, so without this pass the intermediate formulas of nested
 * quantifier chains grow multiplicatively. */
Formula simplify(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atm:
      if (atom_ground(f.get_atom())) return Formula::boolean(eval_qf(f, {}));
      return f;
    case Formula::Kind::Not: {
      Formula k = simplify(f.kid(0));
      if (k.kind() == Formula::Kind::True) return Formula::fls();
      if (k.kind() == Formula::Kind::False) return Formula::tru();
      if (k.kind() == Formula::Kind::Not) return k.kid(0);
      return Formula::negate(std::move(k));
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool junction_and = f.kind() == Formula::Kind::And;
      std::vector<Formula> flat;
      std::set<std::string> seen;
      bool absorbed = false;
      auto add = [&](const auto& self, const Formula& k) -> void {
        if (absorbed) return;
        if (k.kind() == f.kind()) {
          for (const Formula& kk : k.kids()) self(self, kk);
          return;
        }
        if (k.kind() ==
            (junction_and ? Formula::Kind::True : Formula::Kind::False))
          return;
        if (k.kind() ==
            (junction_and ? Formula::Kind::False : Formula::Kind::True)) {
          absorbed = true;
          return;
        }
        if (seen.insert(k.str()).second) flat.push_back(k);
      };
      for (const Formula& k : f.kids()) add(add, simplify(k));
      if (absorbed) return Formula::boolean(!junction_and);
      for (const Formula& k : flat) {
        std::string dual = k.kind() == Formula::Kind::Not
                               ? k.kid(0).str()
                               : Formula::negate(k).str();
        if (seen.count(dual)) return Formula::boolean(!junction_and);
      }
      // Resolution between literal kids and opposite-junction kids: a literal
      // subsumes any sibling junction that repeats it and deletes its
      // complement from sibling junctions. Restart from the top when a
      // junction collapses; every pass strictly shrinks the formula.
      std::set<std::string> lits, duals;
      for (const Formula& k : flat) {
        if (k.kind() != Formula::Kind::Atm && k.kind() != Formula::Kind::Not)
          continue;
        lits.insert(k.str());
        duals.insert(k.kind() == Formula::Kind::Not
                         ? k.kid(0).str()
                         : Formula::negate(k).str());
      }
      if (!lits.empty()) {
        Formula::Kind inner =
            junction_and ? Formula::Kind::Or : Formula::Kind::And;
        bool changed = false;
        std::vector<Formula> next;
        next.reserve(flat.size());
        for (Formula& k : flat) {
          if (k.kind() != inner) {
            next.push_back(std::move(k));
            continue;
          }
          bool subsumed = false;
          std::vector<Formula> kept;
          for (const Formula& kk : k.kids()) {
            std::string s = kk.str();
            if (lits.count(s)) {
              subsumed = true;
              break;
            }
            if (duals.count(s)) continue;
            kept.push_back(kk);
          }
          if (subsumed) {
            changed = true;
            continue;
          }
          if (kept.empty()) return Formula::boolean(!junction_and);
          if (kept.size() != k.kids().size()) {
            changed = true;
            k = inner == Formula::Kind::Or ? Formula::disj(std::move(kept))
                                           : Formula::conj(std::move(kept));
          }
          next.push_back(std::move(k));
        }
        if (changed)
          return simplify(junction_and ? Formula::conj(std::move(next))
                                       : Formula::disj(std::move(next)));
        flat = std::move(next);
      }
      if (flat.empty()) return Formula::boolean(junction_and);
      if (flat.size() == 1) return flat[0];
      return junction_and ? Formula::conj(std::move(flat))
                          : Formula::disj(std::move(flat));
    }
    case Formula::Kind::Implies: {
      Formula a = simplify(f.kid(0));
      Formula b = simplify(f.kid(1));
      if (a.kind() == Formula::Kind::True) return b;
      if (a.kind() == Formula::Kind::False) return Formula::tru();
      if (b.kind() == Formula::Kind::True) return Formula::tru();
      if (b.kind() == Formula::Kind::False) {
        if (a.kind() == Formula::Kind::Not) return a.kid(0);
        return Formula::negate(std::move(a));
      }
      return Formula::implies(std::move(a), std::move(b));
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      Formula b = simplify(f.kid(0));
      if (b.kind() == Formula::Kind::True || b.kind() == Formula::Kind::False)
        return b;
      return Formula::quant(f.kind(), f.qvar(), f.qsort(), std::move(b));
    }
  }
  throw internal_error("unhandled formula kind");
}

bool formula_mentions_x(const Formula& f, const Var& x) {
  if (f.kind() == Formula::Kind::Atm)
    return atom_mentions_vec(f.get_atom(), x);
  for (const Formula& k : f.kids()) {
    if (formula_mentions_x(k, x)) return true;
  }
  return false;
}

Formula eliminate_core(const Formula& f, const Var& x, const Signature& sig) {
  std::vector<Formula> parts;
  for (const auto& br : dnf_branches(f)) {
    std::vector<XBranch> xbs;
    normalize_x(br, x, sig, xbs);
    for (const XBranch& b : xbs) {
      if (b.pin) {
        std::vector<Formula> fs;
        fs.reserve(b.rest.size());
        for (const Lit& l : b.rest)
          fs.push_back(subst_vec(lit_formula(l), x, *b.pin));
        parts.push_back(Formula::conj(std::move(fs)));
        continue;
      }
      std::vector<Formula> fs;
      for (const Lit& l : b.residual) fs.push_back(lit_formula(l));
      bool dead = false;
      for (const auto& [p, bucket] : b.fin) {
        Formula g = eliminate_vec_var_finite(bucket, x, p);
        if (g.is_false()) {
          dead = true;
          break;
        }
        fs.push_back(g);
      }
      if (dead) continue;
      if (!b.real_lits.empty())
        fs.push_back(eliminate_vec_var_real(b.real_lits, x));
      parts.push_back(Formula::conj(std::move(fs)));
    }
  }
  return simplify(Formula::disj(std::move(parts)));
}

/** Distributes the quantifier over disjunctions and factors conjuncts free
 * of x out of its scope before resorting to disjunctive branching, so only
 * the genuinely x-entangled core pays the branch product. */
Formula elim_rec(const Formula& f, const Var& x, const Signature& sig) {
  if (!formula_mentions_x(f, x)) return f;
  if (f.kind() == Formula::Kind::Or) {
    std::vector<Formula> ks;
    ks.reserve(f.kids().size());
    for (const Formula& k : f.kids()) ks.push_back(elim_rec(k, x, sig));
    return Formula::disj(std::move(ks));
  }
  if (f.kind() == Formula::Kind::And) {
    std::vector<Formula> keep, dep;
    for (const Formula& k : f.kids()) {
      (formula_mentions_x(k, x) ? dep : keep).push_back(k);
    }
    if (!keep.empty()) {
      keep.push_back(elim_rec(Formula::conj(std::move(dep)), x, sig));
      return Formula::conj(std::move(keep));
    }
    // Every conjunct mentions x. Split the narrowest disjunctive conjunct
    // one step at a time so simplification prunes dead branches between
    // steps; materializing the full product first can be exponentially
    // larger than the sum of the live branches.
    int best = -1;
    for (int i = 0; i < static_cast<int>(f.kids().size()); ++i) {
      if (f.kid(i).kind() != Formula::Kind::Or) continue;
      if (best < 0 || f.kid(i).kids().size() < f.kid(best).kids().size())
        best = i;
    }
    if (best >= 0) {
      std::vector<Formula> branches;
      for (const Formula& d : f.kid(best).kids()) {
        std::vector<Formula> ks;
        ks.reserve(f.kids().size());
        for (int i = 0; i < static_cast<int>(f.kids().size()); ++i)
          ks.push_back(i == best ? d : f.kid(i));
        branches.push_back(
            elim_rec(simplify(Formula::conj(std::move(ks))), x, sig));
      }
      return simplify(Formula::disj(std::move(branches)));
    }
  }
  return eliminate_core(f, x, sig);
}

Formula eliminate_one(const Formula& qf, const Var& x, const Signature& sig) {
  Formula split = to_nnf(infinity_split(simplify(qf)));
  return simplify(elim_rec(split, x, sig));
}

Formula go(const Formula& f, const Signature& sig, int max_block) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atm:
      return f;
    case Formula::Kind::Not:
      return Formula::negate(go(f.kid(0), sig, max_block));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> ks;
      ks.reserve(f.kids().size());
      for (const Formula& k : f.kids()) ks.push_back(go(k, sig, max_block));
      return f.kind() == Formula::Kind::And ? Formula::conj(std::move(ks))
                                            : Formula::disj(std::move(ks));
    }
    case Formula::Kind::Implies:
      return Formula::implies(go(f.kid(0), sig, max_block),
                              go(f.kid(1), sig, max_block));
    case Formula::Kind::Exists: {
      if (f.qsort() == Sort::Val)
        return simplify(eliminate_val_exists(
            simplify(to_nnf(go(f.kid(0), sig, max_block))), f.qvar()));
      std::vector<Var> vars;
      Formula body = f;
      while (body.kind() == Formula::Kind::Exists &&
             body.qsort() == Sort::Vec) {
        vars.push_back(body.qvar());
        body = body.kid(0);
      }
      if (static_cast<int>(vars.size()) > max_block)
        throw unsupported_error("existential vector block longer than " +
                                std::to_string(max_block));
      Formula inner = go(body, sig, max_block);
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        inner = eliminate_one(inner, *it, sig);
      return inner;
    }
    case Formula::Kind::Forall: {
      Formula body =
          simplify(to_nnf(Formula::negate(go(f.kid(0), sig, max_block))));
      Formula ex = f.qsort() == Sort::Val
                       ? simplify(eliminate_val_exists(body, f.qvar()))
                       : eliminate_one(body, f.qvar(), sig);
      return simplify(Formula::negate(ex));
    }
  }
  throw internal_error("unhandled formula kind");
}

Formula pipeline_input(const Formula& f) { return to_two_sorted(l_to_order(f)); }

/* ---- witness construction ---- */

Int pow_int(const Int& p, const Int& e) {
  Int r = 1;
  for (Int i = 0; i < e; ++i) r *= p;
  return r;
}

Rat pow_rat(const Int& p, const Int& e) {
  if (e >= 0) return Rat(pow_int(p, e));
  return Rat(Int(1), pow_int(p, -e));
}

Int mod_inv(Int a, const Int& m) {
  Int r0 = m, r1 = ((a % m) + m) % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    Int s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw internal_error("modular inverse of a non-unit");
  return ((s0 % m) + m) % m;
}

/* Residue of a p-integral rational modulo a power of p. */
Int rat_mod(const Rat& a, const Int& m) {
  Int num = ((a.num() % m) + m) % m;
  Int den = ((a.den() % m) + m) % m;
  return (num * mod_inv(den, m)) % m;
}

Int floor_rat(const Rat& q) {
  Int f = q.num() / q.den();
  if (q.num() % q.den() != 0 && q.num() < 0) --f;
  return f;
}

Int ceil_rat(const Rat& q) { return -floor_rat(-q); }

struct Cong {
  Int p;
  Rat a;  // match a to p-adic precision n: vp(y - a) >= n
  Int n;
};

struct Bounds {
  std::optional<Rat> lo, hi;
  bool lo_strict = false, hi_strict = false;
};

bool bounds_ok(const Rat& y, const Bounds& bd) {
  if (bd.lo && (bd.lo_strict ? !(y > *bd.lo) : !(y >= *bd.lo))) return false;
  if (bd.hi && (bd.hi_strict ? !(y < *bd.hi) : !(y <= *bd.hi))) return false;
  return true;
}

Bounds real_bounds(const std::vector<Lit>& real_lits, const Var& x) {
  Bounds bd;
  for (const Lit& l : real_lits) {
    const auto& at = std::get<OrdAtom>(l.atom);
    Rat c = at.t.coeff(x);
    Rat r0 = at.t.subst(x, VecTerm()).constant_part();
    Rat v = -r0 / c;
    if (c > Rat(0)) {
      if (!bd.lo || v > *bd.lo || (v == *bd.lo && at.strict)) {
        bd.lo = v;
        bd.lo_strict = at.strict;
      }
    } else {
      if (!bd.hi || v < *bd.hi || (v == *bd.hi && at.strict)) {
        bd.hi = v;
        bd.hi_strict = at.strict;
      }
    }
  }
  return bd;
}

Int choose_aux_prime(const Signature& sig) {
  for (Int q = 2;; ++q) {
    if (!is_prime(q)) continue;
    bool used = false;
    for (const Place& p : sig.s0())
      if (p.is_finite() && p.prime() == q) used = true;
    if (!used) return q;
  }
}

/* Largest constant that the bucket's demands can distinguish, used to pad
   congruence precision when the per-place witness sits on a center. */
Int bucket_const_bound(const std::vector<Lit>& bucket) {
  Int bound = 0;
  Int mods = 1;
  auto eat = [&](const ValTerm& t) {
    if (!t.is_infinite()) {
      Int c = mp::abs(t.constant_part());
      if (c > bound) bound = c;
    }
  };
  for (const Lit& l : bucket)
    std::visit(
        [&](const auto& at) {
          using T = std::decay_t<decltype(at)>;
          if constexpr (std::is_same_v<T, ValLeAtom> ||
                        std::is_same_v<T, ValEqAtom>) {
            eat(at.lhs);
            eat(at.rhs);
          } else if constexpr (std::is_same_v<T, DivAtom>) {
            eat(at.t);
            if (mods < 60) mods = mp::lcm(mods, at.n);
          }
        },
        l.atom);
  return bound + mods;
}

/* Per-place witness plus the precision needed to keep every demand of the
   bucket invariant under perturbations of order >= that precision. Prefers
   a value off every sphere center so that all center distances are finite
   and the precision is exact. */
std::optional<std::pair<Rat, Int>> place_witness(
    const std::vector<Lit>& bucket, const Var& x, const Place& p) {
  auto a0 = witness_finite_conj(bucket, x, p, {});
  if (!a0) return std::nullopt;
  Rat a = *a0;
  Int pr = p.prime();

  CenteredSystem cs = normalize_to_centers(bucket, x, p);
  std::vector<Rat> centers;
  centers.reserve(cs.spheres.centers.size());
  for (const VecTerm& c : cs.spheres.centers) {
    if (!c.is_constant())
      throw internal_error("free symbol in a witness-path sphere center");
    centers.push_back(c.constant_part());
  }

  Formula bucket_f = branch_formula(bucket);
  auto sat_at = [&](const Rat& y) {
    Assignment asg;
    asg.vec[x] = y;
    return eval_qf(bucket_f, asg);
  };
  auto off_centers = [&](const Rat& y) {
    for (const Rat& c : centers)
      if (y == c) return false;
    return true;
  };

  Int pad = bucket_const_bound(bucket);
  if (!off_centers(a)) {
    Int base = pad + 1;
    for (const Rat& c : centers) {
      ValInt d = vp(a - c, pr);
      if (!d.is_infinite() && d.finite() >= base) base = d.finite() + 1;
    }
    for (Int k = base; k <= base + 24; ++k) {
      bool moved = false;
      for (Int u = 1; u < pr && !moved; ++u) {
        Rat y = a + Rat(u) * pow_rat(pr, k);
        if (off_centers(y) && sat_at(y)) {
          a = y;
          moved = true;
        }
      }
      if (moved) break;
    }
  }

  std::optional<Int> maxd;
  bool coincident = false;
  for (const Rat& c : centers) {
    ValInt d = vp(a - c, pr);
    if (d.is_infinite())
      coincident = true;
    else if (!maxd || d.finite() > *maxd)
      maxd = d.finite();
  }
  Int prec = maxd ? *maxd + 1 : Int(1);
  if (coincident) prec += pad;
  return std::make_pair(a, prec);
}

std::vector<Rat> glue_candidates(std::vector<Cong> congs, const Bounds& bd,
                                 const std::vector<Lit>& real_lits,
                                 const Var& x, const Signature& sig) {
  std::vector<Rat> cands;
  if (congs.empty()) {
    if (real_lits.empty()) return {Rat(0)};
    try {
      cands.push_back(witness_real(real_lits, x, {}));
    } catch (const no_witness_error&) {
    }
    return cands;
  }

  Int d = 1;
  std::vector<Int> mods;
  for (const Cong& c : congs) {
    ValInt v = vp(c.a, c.p);
    Int e = (!v.is_infinite() && v.finite() < 0) ? Int(-v.finite()) : Int(0);
    d *= pow_int(c.p, e);
    Int m = c.n + e;
    if (m < 1) m = 1;
    mods.push_back(pow_int(c.p, m));
  }
  Int big = 1, rem = 0;
  for (std::size_t i = 0; i < congs.size(); ++i) {
    Int target = rat_mod(Rat(d) * congs[i].a, mods[i]);
    Int t = (((target - rem) % mods[i]) + mods[i]) % mods[i];
    t = (t * mod_inv(big % mods[i], mods[i])) % mods[i];
    rem += big * t;
    big *= mods[i];
  }

  auto yk = [&](const Rat& k) { return (Rat(rem) + Rat(big) * k) / Rat(d); };
  auto offer = [&](const Rat& k) {
    Rat y = yk(k);
    if (bounds_ok(y, bd)) cands.push_back(y);
  };
  offer(Rat(0));
  if (bd.lo || bd.hi) {
    Rat db(d), bg(big);
    std::optional<Rat> klo, khi;
    if (bd.lo) klo = (*bd.lo * db - Rat(rem)) / bg;
    if (bd.hi) khi = (*bd.hi * db - Rat(rem)) / bg;
    if (klo) offer(Rat(ceil_rat(*klo)));
    if (klo) offer(Rat(ceil_rat(*klo) + 1));
    if (khi) offer(Rat(floor_rat(*khi)));
    if (khi) offer(Rat(floor_rat(*khi) - 1));
    if (klo && khi) {
      Int q = choose_aux_prime(sig);
      Rat width = *khi - *klo;
      if (width > Rat(0)) {
        Int qm = 1;
        while (Rat(qm) * width <= Rat(2)) qm *= q;
        Rat mid = (*klo + *khi) / Rat(2);
        Int a = floor_rat(mid * Rat(qm));
        for (Int s = -1; s <= 1; ++s) offer(Rat(a + s, qm));
      }
    }
  }
  return cands;
}

Rat pick_value(const Formula& g, const Var& x, const Signature& sig) {
  Formula split = to_nnf(infinity_split(g));
  Assignment empty;
  for (const auto& br : dnf_branches(split)) {
    std::vector<XBranch> xbs;
    normalize_x(br, x, sig, xbs);
    for (const XBranch& b : xbs) {
      if (b.pin) {
        if (!b.pin->is_constant())
          throw internal_error("free symbol in a witness pin");
        Rat cand = b.pin->constant_part();
        Assignment asg;
        asg.vec[x] = cand;
        bool ok = true;
        for (const Lit& l : b.rest)
          if (!eval_qf(lit_formula(l), asg)) {
            ok = false;
            break;
          }
        if (ok) return cand;
        continue;
      }
      bool dead = false;
      for (const Lit& l : b.residual)
        if (!eval_qf(lit_formula(l), empty)) {
          dead = true;
          break;
        }
      if (dead) continue;

      std::vector<Lit> all = b.residual;
      for (const auto& [p, bucket] : b.fin)
        all.insert(all.end(), bucket.begin(), bucket.end());
      all.insert(all.end(), b.real_lits.begin(), b.real_lits.end());
      Formula whole = branch_formula(all);
      auto verify = [&](const Rat& y) {
        Assignment asg;
        asg.vec[x] = y;
        return eval_qf(whole, asg);
      };

      std::vector<Cong> congs;
      bool missing = false;
      for (const auto& [p, bucket] : b.fin) {
        auto w = place_witness(bucket, x, p);
        if (!w) {
          missing = true;
          break;
        }
        congs.push_back({p.prime(), w->first, w->second});
      }
      if (missing) continue;
      Bounds bd = real_bounds(b.real_lits, x);

      for (int round = 0; round < 5; ++round) {
        std::vector<Cong> widened = congs;
        for (Cong& c : widened) c.n += 2 * round;
        for (const Rat& y :
             glue_candidates(widened, bd, b.real_lits, x, sig))
          if (verify(y)) return y;
      }
    }
  }
  throw internal_error("no branch yielded a witness value");
}

}  // namespace

Formula eliminate_block(const Formula& f, const Signature& sig,
                        int max_block) {
  Formula g = pipeline_input(f);
  std::vector<Var> vars;
  Formula body = g;
  while (body.kind() == Formula::Kind::Exists && body.qsort() == Sort::Vec) {
    vars.push_back(body.qvar());
    body = body.kid(0);
  }
  if (!body.is_qf())
    throw internal_error("eliminate_block needs a quantifier-free body");
  if (static_cast<int>(vars.size()) > max_block)
    throw unsupported_error("existential vector block longer than " +
                            std::to_string(max_block));
  for (auto it = vars.rbegin(); it != vars.rend(); ++it)
    body = eliminate_one(body, *it, sig);
  return body;
}

Formula eliminate_all(const Formula& f, const Signature& sig, int max_block) {
  return simplify(go(pipeline_input(f), sig, max_block));
}

bool decide(const Formula& f, const Signature& sig, int max_block) {
  auto free = validate(f, sig, {});
  if (!free.empty()) throw sort_error("decide needs a sentence");
  return decide_ground_val(eliminate_all(f, sig, max_block));
}

std::map<Var, Rat> witness(const Formula& f, const Signature& sig,
                           int max_block) {
  if (!decide(f, sig, max_block))
    throw no_witness_error("the sentence is false");
  Formula g = pipeline_input(f);
  std::vector<Var> vars;
  Formula body = g;
  while (body.kind() == Formula::Kind::Exists && body.qsort() == Sort::Vec) {
    vars.push_back(body.qvar());
    body = body.kid(0);
  }
  std::map<Var, Rat> out;
  Assignment asg;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    Formula inner = body;
    for (std::size_t j = vars.size(); j-- > i + 1;)
      inner = Formula::exists(vars[j], Sort::Vec, inner);
    Formula elim = go(plug(inner, asg), sig, max_block);
    Rat v = pick_value(elim, vars[i], sig);
    out[vars[i]] = v;
    asg.vec[vars[i]] = v;
  }
  Formula closed = go(plug(body, asg), sig, max_block);
  if (!decide_ground_val(closed))
    throw internal_error("combined witness failed verification");
  return out;
}

}  // namespace placeq
