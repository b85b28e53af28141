#include "placeq/formula.hpp"

#include <algorithm>

#include <boost/multiprecision/cpp_int.hpp>

namespace placeq {

namespace mp = boost::multiprecision;

struct Formula::Node {
  Kind kind;
  std::optional<Atom> atm;
  std::vector<Formula> kids;
  Var var;
  Sort sort = Sort::Vec;
};

namespace {

// Integer lcm of denominators, for clearing a term to integer coefficients.
Int denom_lcm(const VecTerm& t) {
  Int l = t.constant_part().den();
  for (const auto& [x, c] : t.coeffs()) l = mp::lcm(l, c.den());
  return l;
}

Int content_gcd(const VecTerm& t) {
  Int g = mp::abs(t.constant_part().num());
  for (const auto& [x, c] : t.coeffs()) g = mp::gcd(g, mp::abs(c.num()));
  return g;
}

// Scales t by a positive rational so coefficients are coprime integers.
VecTerm normalize_scale(const VecTerm& t) {
  if (t.is_zero()) return t;
  VecTerm u = t.scaled(Rat(denom_lcm(t)));
  Int g = content_gcd(u);
  if (g > 1) u = u.scaled(Rat(Int(1), g));
  return u;
}

// As above, and also fixes the sign of the leading coefficient, so that
// t = 0 and -t = 0 normalize identically.
VecTerm normalize_signed(const VecTerm& t) {
  VecTerm u = normalize_scale(t);
  const Rat& lead =
      u.coeffs().empty() ? u.constant_part() : u.coeffs().begin()->second;
  if (lead.sign() < 0) u = -u;
  return u;
}

// Determined value of a ValTerm: a ValInt if it contains no variables or
// valuation applications, otherwise nullopt.
std::optional<ValInt> determined(const ValTerm& t) {
  if (t.is_infinite()) return ValInt::infinity();
  if (t.is_constant()) return ValInt(t.constant_part());
  return std::nullopt;
}

bool eval_l_const(const Place& p, const Rat& x, const Rat& y) {
  if (p.is_real()) return abs_le_inf(x, y);
  return abs_le_p(x, y, p.prime());
}

}  // namespace

Formula Formula::node(Kind k, std::vector<Formula> kids, Var var, Sort sort) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->kids = std::move(kids);
  n->var = std::move(var);
  n->sort = sort;
  return Formula(std::move(n));
}

Formula Formula::atom_node(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atm;
  n->atm = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::tru() {
  static const Formula f = node(Kind::True, {}, {}, Sort::Vec);
  return f;
}

Formula Formula::fls() {
  static const Formula f = node(Kind::False, {}, {}, Sort::Vec);
  return f;
}

Formula Formula::atom(Atom a) {
  if (auto* e = std::get_if<VecEqAtom>(&a)) {
    if (e->t.is_constant()) return boolean(e->t.constant_part().is_zero());
    e->t = normalize_signed(e->t);
  } else if (auto* o = std::get_if<OrdAtom>(&a)) {
    if (o->t.is_constant()) {
      int s = o->t.constant_part().sign();
      return boolean(o->strict ? s > 0 : s >= 0);
    }
    o->t = normalize_scale(o->t);
  } else if (auto* le = std::get_if<ValLeAtom>(&a)) {
    if (le->rhs.is_infinite()) return tru();
    if (le->lhs == le->rhs) return tru();
    auto dl = determined(le->lhs), dr = determined(le->rhs);
    if (dl && dr) return boolean(*dl <= *dr);
    if (dl && dl->is_infinite()) {
      // oo <= rhs forces rhs = oo; rhs is symbolic here.
      return atom(ValEqAtom{le->rhs, ValTerm::infinity()});
    }
    Int c = mp::min(le->lhs.constant_part(), le->rhs.constant_part());
    if (c != 0 && !le->lhs.is_infinite() && !le->rhs.is_infinite()) {
      le->lhs = le->lhs - ValTerm::constant(c);
      le->rhs = le->rhs - ValTerm::constant(c);
    }
  } else if (auto* eq = std::get_if<ValEqAtom>(&a)) {
    if (eq->lhs == eq->rhs) return tru();
    auto dl = determined(eq->lhs), dr = determined(eq->rhs);
    if (dl && dr) return boolean(*dl == *dr);
    if (!eq->lhs.is_infinite() && !eq->rhs.is_infinite()) {
      Int c = mp::min(eq->lhs.constant_part(), eq->rhs.constant_part());
      if (c != 0) {
        eq->lhs = eq->lhs - ValTerm::constant(c);
        eq->rhs = eq->rhs - ValTerm::constant(c);
      }
      // Orient by term order so s = t and t = s normalize identically.
      if (eq->rhs < eq->lhs) std::swap(eq->lhs, eq->rhs);
    } else if (eq->lhs.is_infinite()) {
      std::swap(eq->lhs, eq->rhs);
    }
  } else if (auto* d = std::get_if<DivAtom>(&a)) {
    if (d->n < 1) throw internal_error("divisibility with modulus < 1");
    if (d->n == 1) return tru();
    if (d->t.is_infinite()) return tru();
    // Reduce coefficients mod n. A coefficient that is a nonzero multiple of
    // n maps to n, not 0: its summand can still be oo, which must keep
    // satisfying the atom.
    ValTerm r = ValTerm::constant(((d->t.constant_part() % d->n) + d->n) % d->n);
    for (const auto& [g, c] : d->t.var_coeffs()) {
      Int m = ((c % d->n) + d->n) % d->n;
      if (m == 0) m = d->n;
      r = r + ValTerm::var(g).scaled(m);
    }
    for (const auto& [ap, c] : d->t.vapp_coeffs()) {
      Int m = ((c % d->n) + d->n) % d->n;
      if (m == 0) m = d->n;
      r = r + ValTerm::vapp(ap.place, ap.arg).scaled(m);
    }
    if (r.is_constant()) return boolean(r.constant_part() % d->n == 0);
    d->t = r;
  } else if (auto* l = std::get_if<LAtom>(&a)) {
    if (l->x == l->y) return tru();
    if (l->x.is_constant() && l->x.constant_part().is_zero()) return tru();
    if (l->y.is_constant() && l->y.constant_part().is_zero()) {
      // |x| <= 0 pins x to 0 at every place.
      return atom(VecEqAtom{l->x});
    }
    if (l->x.is_constant() && l->y.is_constant()) {
      return boolean(
          eval_l_const(l->place, l->x.constant_part(), l->y.constant_part()));
    }
  } else if (auto* m = std::get_if<MAtom>(&a)) {
    if (m->x.is_constant() && m->y.is_constant() && m->z.is_constant()) {
      const Rat& x = m->x.constant_part();
      const Rat& y = m->y.constant_part();
      const Rat& z = m->z.constant_part();
      if (m->place.is_real()) {
        return boolean(abs_le_inf(x * y, z) && abs_le_inf(z, x * y));
      }
      const Int& p = m->place.prime();
      return boolean(vp(x, p) + vp(y, p) == vp(z, p));
    }
  } else if (auto* q = std::get_if<QAtom>(&a)) {
    if (q->n < 1) throw internal_error("divisibility with modulus < 1");
    if (q->n == 1) return tru();
    if (q->t.is_constant()) {
      ValInt v = vp(q->t.constant_part(), q->place.prime());
      if (v.is_infinite()) return tru();
      return boolean(v.finite() % q->n == 0);
    }
  }
  return atom_node(std::move(a));
}

Formula Formula::negate(Formula f) {
  switch (f.kind()) {
    case Kind::True:
      return fls();
    case Kind::False:
      return tru();
    case Kind::Not:
      return f.kid();
    case Kind::Atm:
      if (auto* o = std::get_if<OrdAtom>(&f.get_atom())) {
        return atom(OrdAtom{-o->t, !o->strict});
      }
      return node(Kind::Not, {std::move(f)}, {}, Sort::Vec);
    default:
      return node(Kind::Not, {std::move(f)}, {}, Sort::Vec);
  }
}

Formula Formula::junction(Kind k, std::vector<Formula> kids) {
  const bool is_and = k == Kind::And;
  const Formula unit = is_and ? tru() : fls();
  const Formula zero = is_and ? fls() : tru();
  std::vector<Formula> flat;
  for (auto& f : kids) {
    if (f == zero) return zero;
    if (f == unit) continue;
    if (f.kind() == k) {
      for (const auto& g : f.kids()) flat.push_back(g);
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (flat.size() <= 64) {
    std::vector<Formula> dedup;
    for (auto& f : flat) {
      if (std::find(dedup.begin(), dedup.end(), f) == dedup.end()) {
        dedup.push_back(std::move(f));
      }
    }
    flat = std::move(dedup);
  }
  if (flat.empty()) return unit;
  if (flat.size() == 1) return flat[0];
  return node(k, std::move(flat), {}, Sort::Vec);
}

Formula Formula::conj(std::vector<Formula> kids) {
  return junction(Kind::And, std::move(kids));
}

Formula Formula::disj(std::vector<Formula> kids) {
  return junction(Kind::Or, std::move(kids));
}

Formula Formula::conj(Formula a, Formula b) {
  return conj(std::vector<Formula>{std::move(a), std::move(b)});
}

Formula Formula::disj(Formula a, Formula b) {
  return disj(std::vector<Formula>{std::move(a), std::move(b)});
}

Formula Formula::implies(Formula a, Formula b) {
  if (a.is_true()) return b;
  if (a.is_false()) return tru();
  if (b.is_true()) return tru();
  if (b.is_false()) return negate(std::move(a));
  return node(Kind::Implies, {std::move(a), std::move(b)}, {}, Sort::Vec);
}

Formula Formula::quant(Kind k, const Var& x, Sort s, Formula body) {
  if (body.is_true() || body.is_false()) return body;
  std::set<Var> vec, val;
  free_vars(body, vec, val);
  if (!vec.count(x) && !val.count(x)) return body;
  return node(k, {std::move(body)}, x, s);
}

Formula Formula::exists(const Var& x, Sort s, Formula body) {
  return quant(Kind::Exists, x, s, std::move(body));
}

Formula Formula::forall(const Var& x, Sort s, Formula body) {
  return quant(Kind::Forall, x, s, std::move(body));
}

Formula::Kind Formula::kind() const { return n_->kind; }

const Atom& Formula::get_atom() const {
  if (!n_->atm) throw internal_error("get_atom on non-atom");
  return *n_->atm;
}

const std::vector<Formula>& Formula::kids() const { return n_->kids; }

const Formula& Formula::kid(std::size_t i) const {
  if (i >= n_->kids.size()) throw internal_error("kid index out of range");
  return n_->kids[i];
}

const Var& Formula::qvar() const { return n_->var; }

Sort Formula::qsort() const { return n_->sort; }

bool Formula::is_qf() const {
  if (kind() == Kind::Exists || kind() == Kind::Forall) return false;
  for (const auto& k : kids()) {
    if (!k.is_qf()) return false;
  }
  return true;
}

bool Formula::operator==(const Formula& o) const {
  if (n_ == o.n_) return true;
  if (n_->kind != o.n_->kind) return false;
  switch (n_->kind) {
    case Kind::True:
    case Kind::False:
      return true;
    case Kind::Atm:
      return *n_->atm == *o.n_->atm;
    case Kind::Exists:
    case Kind::Forall:
      if (n_->var != o.n_->var || n_->sort != o.n_->sort) return false;
      [[fallthrough]];
    default: {
      if (n_->kids.size() != o.n_->kids.size()) return false;
      for (std::size_t i = 0; i < n_->kids.size(); ++i) {
        if (!(n_->kids[i] == o.n_->kids[i])) return false;
      }
      return true;
    }
  }
}

std::optional<Lit> as_literal(const Formula& f) {
  if (f.kind() == Formula::Kind::Atm) return Lit{false, f.get_atom()};
  if (f.kind() == Formula::Kind::Not &&
      f.kid().kind() == Formula::Kind::Atm) {
    return Lit{true, f.kid().get_atom()};
  }
  return std::nullopt;
}

Formula lit_formula(const Lit& l) {
  Formula a = Formula::atom(l.atom);
  return l.neg ? Formula::negate(a) : a;
}

namespace {

Formula nnf_rec(const Formula& f, bool pos) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return Formula::boolean(pos);
    case K::False:
      return Formula::boolean(!pos);
    case K::Atm:
      return pos ? f : Formula::negate(f);
    case K::Not:
      return nnf_rec(f.kid(), !pos);
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.kids().size());
      for (const auto& k : f.kids()) kids.push_back(nnf_rec(k, pos));
      bool conj = (f.kind() == K::And) == pos;
      return conj ? Formula::conj(std::move(kids))
                  : Formula::disj(std::move(kids));
    }
    case K::Implies: {
      if (pos) {
        return Formula::disj(nnf_rec(f.kid(0), false), nnf_rec(f.kid(1), true));
      }
      return Formula::conj(nnf_rec(f.kid(0), true), nnf_rec(f.kid(1), false));
    }
    case K::Exists:
    case K::Forall: {
      bool ex = (f.kind() == K::Exists) == pos;
      Formula body = nnf_rec(f.kid(), pos);
      return ex ? Formula::exists(f.qvar(), f.qsort(), std::move(body))
                : Formula::forall(f.qvar(), f.qsort(), std::move(body));
    }
  }
  throw internal_error("nnf: unreachable");
}

bool lit_less(const Lit& a, const Lit& b) {
  if (a.neg != b.neg) return a.neg < b.neg;
  return a.atom < b.atom;
}

bool lit_eq(const Lit& a, const Lit& b) {
  return a.neg == b.neg && a.atom == b.atom;
}

// Merges sorted branches; nullopt on a directly contradictory pair.
std::optional<std::vector<Lit>> merge_branches(const std::vector<Lit>& a,
                                               const std::vector<Lit>& b) {
  std::vector<Lit> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             lit_less);
  out.erase(std::unique(out.begin(), out.end(), lit_eq), out.end());
  // Positives come first; walk both sorted halves for a shared atom.
  auto mid = std::find_if(out.begin(), out.end(),
                          [](const Lit& l) { return l.neg; });
  for (auto i = out.begin(), j = mid; i != mid && j != out.end();) {
    if (i->atom < j->atom) {
      ++i;
    } else if (j->atom < i->atom) {
      ++j;
    } else {
      return std::nullopt;
    }
  }
  return out;
}

constexpr std::size_t kDnfCap = 200000;

std::vector<std::vector<Lit>> dnf_rec(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return {{}};
    case K::False:
      return {};
    case K::Atm:
    case K::Not: {
      auto l = as_literal(f);
      if (!l) throw internal_error("dnf: non-literal negation");
      return {{*l}};
    }
    case K::Or: {
      std::vector<std::vector<Lit>> out;
      for (const auto& k : f.kids()) {
        auto sub = dnf_rec(k);
        out.insert(out.end(), sub.begin(), sub.end());
        if (out.size() > kDnfCap) throw internal_error("dnf blowup");
      }
      return out;
    }
    case K::And: {
      std::vector<std::vector<Lit>> acc = {{}};
      for (const auto& k : f.kids()) {
        auto sub = dnf_rec(k);
        std::vector<std::vector<Lit>> next;
        for (const auto& a : acc) {
          for (const auto& b : sub) {
            if (auto m = merge_branches(a, b)) next.push_back(std::move(*m));
            if (next.size() > kDnfCap) throw internal_error("dnf blowup");
          }
        }
        acc = std::move(next);
      }
      return acc;
    }
    default:
      throw internal_error("dnf on non-NNF or quantified formula");
  }
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf_rec(f, true); }

std::vector<std::vector<Lit>> dnf_branches(const Formula& f) {
  return dnf_rec(f);
}

Formula branch_formula(const std::vector<Lit>& branch) {
  std::vector<Formula> lits;
  lits.reserve(branch.size());
  for (const auto& l : branch) lits.push_back(lit_formula(l));
  return Formula::conj(std::move(lits));
}

Atom atom_subst_vec(const Atom& a, const Var& x, const VecTerm& by) {
  Atom r = a;
  if (auto* e = std::get_if<VecEqAtom>(&r)) {
    e->t = e->t.subst(x, by);
  } else if (auto* o = std::get_if<OrdAtom>(&r)) {
    o->t = o->t.subst(x, by);
  } else if (auto* le = std::get_if<ValLeAtom>(&r)) {
    le->lhs = le->lhs.subst_vec(x, by);
    le->rhs = le->rhs.subst_vec(x, by);
  } else if (auto* eq = std::get_if<ValEqAtom>(&r)) {
    eq->lhs = eq->lhs.subst_vec(x, by);
    eq->rhs = eq->rhs.subst_vec(x, by);
  } else if (auto* d = std::get_if<DivAtom>(&r)) {
    d->t = d->t.subst_vec(x, by);
  } else if (auto* l = std::get_if<LAtom>(&r)) {
    l->x = l->x.subst(x, by);
    l->y = l->y.subst(x, by);
  } else if (auto* m = std::get_if<MAtom>(&r)) {
    m->x = m->x.subst(x, by);
    m->y = m->y.subst(x, by);
    m->z = m->z.subst(x, by);
  } else if (auto* q = std::get_if<QAtom>(&r)) {
    q->t = q->t.subst(x, by);
  }
  return r;
}

Atom atom_subst_val(const Atom& a, const Var& g, const ValTerm& by) {
  Atom r = a;
  if (auto* le = std::get_if<ValLeAtom>(&r)) {
    le->lhs = le->lhs.subst_val(g, by);
    le->rhs = le->rhs.subst_val(g, by);
  } else if (auto* eq = std::get_if<ValEqAtom>(&r)) {
    eq->lhs = eq->lhs.subst_val(g, by);
    eq->rhs = eq->rhs.subst_val(g, by);
  } else if (auto* d = std::get_if<DivAtom>(&r)) {
    d->t = d->t.subst_val(g, by);
  }
  return r;
}

void atom_vars(const Atom& a, std::set<Var>& vec, std::set<Var>& val) {
  auto add_vec = [&vec](const VecTerm& t) {
    auto vs = t.vars();
    vec.insert(vs.begin(), vs.end());
  };
  auto add_val = [&](const ValTerm& t) {
    auto vv = t.vec_vars();
    vec.insert(vv.begin(), vv.end());
    auto gv = t.val_vars();
    val.insert(gv.begin(), gv.end());
  };
  if (auto* e = std::get_if<VecEqAtom>(&a)) {
    add_vec(e->t);
  } else if (auto* o = std::get_if<OrdAtom>(&a)) {
    add_vec(o->t);
  } else if (auto* le = std::get_if<ValLeAtom>(&a)) {
    add_val(le->lhs);
    add_val(le->rhs);
  } else if (auto* eq = std::get_if<ValEqAtom>(&a)) {
    add_val(eq->lhs);
    add_val(eq->rhs);
  } else if (auto* d = std::get_if<DivAtom>(&a)) {
    add_val(d->t);
  } else if (auto* l = std::get_if<LAtom>(&a)) {
    add_vec(l->x);
    add_vec(l->y);
  } else if (auto* m = std::get_if<MAtom>(&a)) {
    add_vec(m->x);
    add_vec(m->y);
    add_vec(m->z);
  } else if (auto* q = std::get_if<QAtom>(&a)) {
    add_vec(q->t);
  }
}

namespace {

enum class SubstSort { Vec, Val };

Formula subst_rec(const Formula& f, const Var& x, SubstSort ss,
                  const VecTerm* vt, const ValTerm* gt,
                  const std::set<Var>& by_vars) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Atm: {
      Atom a = ss == SubstSort::Vec ? atom_subst_vec(f.get_atom(), x, *vt)
                                    : atom_subst_val(f.get_atom(), x, *gt);
      return Formula::atom(std::move(a));
    }
    case K::Not:
      return Formula::negate(subst_rec(f.kid(), x, ss, vt, gt, by_vars));
    case K::And:
    case K::Or:
    case K::Implies: {
      std::vector<Formula> kids;
      kids.reserve(f.kids().size());
      for (const auto& k : f.kids()) {
        kids.push_back(subst_rec(k, x, ss, vt, gt, by_vars));
      }
      if (f.kind() == K::And) return Formula::conj(std::move(kids));
      if (f.kind() == K::Or) return Formula::disj(std::move(kids));
      return Formula::implies(kids[0], kids[1]);
    }
    case K::Exists:
    case K::Forall: {
      if (f.qvar() == x) return f;
      Formula body = f.kid();
      Var bound = f.qvar();
      if (by_vars.count(bound)) {
        // Capture: rename the bound variable first.
        std::set<Var> vec, val;
        free_vars(body, vec, val);
        std::set<Var> taken = by_vars;
        taken.insert(vec.begin(), vec.end());
        taken.insert(val.begin(), val.end());
        Var nb = fresh_var(bound, taken);
        if (f.qsort() == Sort::Vec) {
          body = subst_vec(body, bound, VecTerm::var(nb));
        } else {
          body = subst_val(body, bound, ValTerm::var(nb));
        }
        bound = nb;
      }
      Formula nb = subst_rec(body, x, ss, vt, gt, by_vars);
      return Formula::quant(f.kind(), bound, f.qsort(), std::move(nb));
    }
  }
  throw internal_error("subst: unreachable");
}

}  // namespace

Formula subst_vec(const Formula& f, const Var& x, const VecTerm& by) {
  return subst_rec(f, x, SubstSort::Vec, &by, nullptr, by.vars());
}

Formula subst_val(const Formula& f, const Var& g, const ValTerm& by) {
  std::set<Var> by_vars = by.vec_vars();
  auto gv = by.val_vars();
  by_vars.insert(gv.begin(), gv.end());
  return subst_rec(f, g, SubstSort::Val, nullptr, &by, by_vars);
}

namespace {

Atom atom_subst_vapp(const Atom& a, const VApp& ap, const ValTerm& by) {
  Atom r = a;
  if (auto* le = std::get_if<ValLeAtom>(&r)) {
    le->lhs = le->lhs.subst_vapp(ap, by);
    le->rhs = le->rhs.subst_vapp(ap, by);
  } else if (auto* eq = std::get_if<ValEqAtom>(&r)) {
    eq->lhs = eq->lhs.subst_vapp(ap, by);
    eq->rhs = eq->rhs.subst_vapp(ap, by);
  } else if (auto* d = std::get_if<DivAtom>(&r)) {
    d->t = d->t.subst_vapp(ap, by);
  }
  return r;
}

}  // namespace

Formula subst_vapp(const Formula& f, const VApp& ap, const ValTerm& by) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Atm:
      return Formula::atom(atom_subst_vapp(f.get_atom(), ap, by));
    case K::Not:
      return Formula::negate(subst_vapp(f.kid(), ap, by));
    case K::And:
    case K::Or:
    case K::Implies: {
      std::vector<Formula> kids;
      kids.reserve(f.kids().size());
      for (const auto& k : f.kids()) kids.push_back(subst_vapp(k, ap, by));
      if (f.kind() == K::And) return Formula::conj(std::move(kids));
      if (f.kind() == K::Or) return Formula::disj(std::move(kids));
      return Formula::implies(kids[0], kids[1]);
    }
    case K::Exists:
    case K::Forall:
      return Formula::quant(f.kind(), f.qvar(), f.qsort(),
                            subst_vapp(f.kid(), ap, by));
  }
  throw internal_error("subst_vapp: unreachable");
}

Formula map_atoms(const Formula& f,
                  const std::function<Formula(const Atom&)>& fn) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Atm:
      return fn(f.get_atom());
    case K::Not:
      return Formula::negate(map_atoms(f.kid(), fn));
    case K::And:
    case K::Or:
    case K::Implies: {
      std::vector<Formula> kids;
      kids.reserve(f.kids().size());
      for (const auto& k : f.kids()) kids.push_back(map_atoms(k, fn));
      if (f.kind() == K::And) return Formula::conj(std::move(kids));
      if (f.kind() == K::Or) return Formula::disj(std::move(kids));
      return Formula::implies(kids[0], kids[1]);
    }
    case K::Exists:
    case K::Forall:
      return Formula::quant(f.kind(), f.qvar(), f.qsort(),
                            map_atoms(f.kid(), fn));
  }
  throw internal_error("map_atoms: unreachable");
}

namespace {

void free_vars_rec(const Formula& f, std::set<Var>& bound, std::set<Var>& vec,
                   std::set<Var>& val) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return;
    case K::Atm: {
      std::set<Var> avec, aval;
      atom_vars(f.get_atom(), avec, aval);
      for (const auto& x : avec) {
        if (!bound.count(x)) vec.insert(x);
      }
      for (const auto& g : aval) {
        if (!bound.count(g)) val.insert(g);
      }
      return;
    }
    case K::Exists:
    case K::Forall: {
      bool added = bound.insert(f.qvar()).second;
      free_vars_rec(f.kid(), bound, vec, val);
      if (added) bound.erase(f.qvar());
      return;
    }
    default:
      for (const auto& k : f.kids()) free_vars_rec(k, bound, vec, val);
      return;
  }
}

}  // namespace

void free_vars(const Formula& f, std::set<Var>& vec, std::set<Var>& val) {
  std::set<Var> bound;
  free_vars_rec(f, bound, vec, val);
}

Var fresh_var(const Var& base, const std::set<Var>& taken) {
  if (!taken.count(base)) return base;
  for (int k = 1;; ++k) {
    Var cand = base + "_" + std::to_string(k);
    if (!taken.count(cand)) return cand;
  }
}

namespace {

Formula alpha_canon_rec(const Formula& f, int& counter) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Exists:
    case K::Forall: {
      Var nv = "@" + std::to_string(counter++);
      Formula body = f.qsort() == Sort::Vec
                         ? subst_vec(f.kid(), f.qvar(), VecTerm::var(nv))
                         : subst_val(f.kid(), f.qvar(), ValTerm::var(nv));
      return Formula::quant(f.kind(), nv, f.qsort(),
                            alpha_canon_rec(body, counter));
    }
    case K::Not:
      return Formula::negate(alpha_canon_rec(f.kid(), counter));
    case K::And:
    case K::Or:
    case K::Implies: {
      std::vector<Formula> kids;
      for (const auto& k : f.kids()) kids.push_back(alpha_canon_rec(k, counter));
      if (f.kind() == K::And) return Formula::conj(std::move(kids));
      if (f.kind() == K::Or) return Formula::disj(std::move(kids));
      return Formula::implies(kids[0], kids[1]);
    }
    default:
      return f;
  }
}

}  // namespace

bool alpha_equal(const Formula& f, const Formula& g) {
  int cf = 0, cg = 0;
  return alpha_canon_rec(f, cf) == alpha_canon_rec(g, cg);
}

namespace {

void val_term_places(const ValTerm& t, std::set<Place>& out) {
  for (const auto& [ap, c] : t.vapp_coeffs()) out.insert(ap.place);
}

void atom_places(const Atom& a, std::set<Place>& out) {
  if (auto* le = std::get_if<ValLeAtom>(&a)) {
    val_term_places(le->lhs, out);
    val_term_places(le->rhs, out);
  } else if (auto* eq = std::get_if<ValEqAtom>(&a)) {
    val_term_places(eq->lhs, out);
    val_term_places(eq->rhs, out);
  } else if (auto* d = std::get_if<DivAtom>(&a)) {
    val_term_places(d->t, out);
  } else if (auto* l = std::get_if<LAtom>(&a)) {
    out.insert(l->place);
  } else if (auto* m = std::get_if<MAtom>(&a)) {
    out.insert(m->place);
  } else if (auto* q = std::get_if<QAtom>(&a)) {
    out.insert(q->place);
  } else if (std::get_if<OrdAtom>(&a)) {
    out.insert(Place::real());
  }
}

void places_rec(const Formula& f, std::set<Place>& out) {
  if (f.kind() == Formula::Kind::Atm) {
    atom_places(f.get_atom(), out);
    return;
  }
  for (const auto& k : f.kids()) places_rec(k, out);
}

}  // namespace

std::set<Place> formula_places(const Formula& f) {
  std::set<Place> out;
  places_rec(f, out);
  return out;
}

}  // namespace placeq
