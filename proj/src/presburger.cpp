#include "placeq/presburger.hpp"

#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "placeq/eval.hpp"

namespace placeq {

namespace mp = boost::multiprecision;

namespace {

using K = Formula::Kind;

void for_each_atom(const Formula& f,
                   const std::function<void(const Atom&)>& fn) {
  switch (f.kind()) {
    case K::True:
    case K::False:
      return;
    case K::Atm:
      fn(f.get_atom());
      return;
    default:
      for (const auto& k : f.kids()) for_each_atom(k, fn);
  }
}

void term_symbols(const ValTerm& t, std::set<Var>& vals,
                  std::set<VApp>& vapps) {
  if (t.is_infinite()) return;
  for (const auto& [g, c] : t.var_coeffs()) vals.insert(g);
  for (const auto& [ap, c] : t.vapp_coeffs()) vapps.insert(ap);
}

void atom_symbols(const Atom& a, std::set<Var>& vals, std::set<VApp>& vapps) {
  if (auto* le = std::get_if<ValLeAtom>(&a)) {
    term_symbols(le->lhs, vals, vapps);
    term_symbols(le->rhs, vals, vapps);
  } else if (auto* eq = std::get_if<ValEqAtom>(&a)) {
    term_symbols(eq->lhs, vals, vapps);
    term_symbols(eq->rhs, vals, vapps);
  } else if (auto* d = std::get_if<DivAtom>(&a)) {
    term_symbols(d->t, vals, vapps);
  }
}

bool atom_mentions_val(const Atom& a, const Var& g) {
  std::set<Var> vals;
  std::set<VApp> vapps;
  atom_symbols(a, vals, vapps);
  return vals.count(g) != 0;
}

Formula vanish_guard(const VApp& ap) {
  return Formula::atom(VecEqAtom{ap.arg});
}

Formula inf_guard(const Var& g) {
  return Formula::atom(ValEqAtom{ValTerm::var(g), ValTerm::infinity()});
}

// Once every symbol of the branch is finite-tagged, a comparison with oo is
// decided by the tag alone.
Formula finite_cleanup(const Formula& f) {
  return map_atoms(f, [](const Atom& a) {
    if (auto* eq = std::get_if<ValEqAtom>(&a)) {
      if (eq->rhs.is_infinite()) return Formula::fls();
    }
    return Formula::atom(a);
  });
}

Formula split_rec(const Formula& h, std::set<Var> done_vals,
                  std::set<VApp> done_vapps) {
  if (h.is_true() || h.is_false()) return h;
  std::set<Var> vals;
  std::set<VApp> vapps;
  for_each_atom(h, [&](const Atom& a) { atom_symbols(a, vals, vapps); });
  for (const auto& ap : vapps) {
    if (done_vapps.count(ap)) continue;
    done_vapps.insert(ap);
    Formula zero =
        Formula::conj(vanish_guard(ap),
                      split_rec(subst_vapp(h, ap, ValTerm::infinity()),
                                done_vals, done_vapps));
    Formula fin = Formula::conj(Formula::negate(vanish_guard(ap)),
                                split_rec(h, done_vals, done_vapps));
    return Formula::disj(std::move(zero), std::move(fin));
  }
  for (const auto& g : vals) {
    if (done_vals.count(g)) continue;
    done_vals.insert(g);
    Formula inf =
        Formula::conj(inf_guard(g),
                      split_rec(subst_val(h, g, ValTerm::infinity()),
                                done_vals, done_vapps));
    Formula fin = Formula::conj(Formula::negate(inf_guard(g)),
                                split_rec(h, done_vals, done_vapps));
    return Formula::disj(std::move(inf), std::move(fin));
  }
  return finite_cleanup(h);
}

Int gamma_coeff(const ValTerm& t, const Var& g) {
  auto it = t.var_coeffs().find(g);
  return it == t.var_coeffs().end() ? Int(0) : it->second;
}

ValTerm drop_var(const ValTerm& t, const Var& g) {
  return t.subst_val(g, ValTerm::constant(0));
}

// Rewrites f so that every atom mentioning g is a positive ValLe or Div.
Formula positivize(const Formula& f, const Var& g) {
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Atm: {
      const Atom& a = f.get_atom();
      if (!atom_mentions_val(a, g)) return f;
      if (auto* eq = std::get_if<ValEqAtom>(&a)) {
        // g is an integer here, so equality with oo fails.
        if (eq->lhs.is_infinite() || eq->rhs.is_infinite())
          return Formula::fls();
        return Formula::conj(Formula::atom(ValLeAtom{eq->lhs, eq->rhs}),
                             Formula::atom(ValLeAtom{eq->rhs, eq->lhs}));
      }
      return f;
    }
    case K::Not: {
      const Formula& kid = f.kid();
      if (kid.kind() != K::Atm)
        throw internal_error("value elimination expects negation normal form");
      const Atom& a = kid.get_atom();
      if (!atom_mentions_val(a, g)) return f;
      if (auto* le = std::get_if<ValLeAtom>(&a)) {
        return Formula::atom(
            ValLeAtom{le->rhs + ValTerm::constant(1), le->lhs});
      }
      if (auto* eq = std::get_if<ValEqAtom>(&a)) {
        if (eq->lhs.is_infinite() || eq->rhs.is_infinite())
          return Formula::tru();
        return Formula::disj(
            Formula::atom(ValLeAtom{eq->lhs + ValTerm::constant(1), eq->rhs}),
            Formula::atom(ValLeAtom{eq->rhs + ValTerm::constant(1), eq->lhs}));
      }
      if (auto* d = std::get_if<DivAtom>(&a)) {
        std::vector<Formula> residues;
        for (Int r = 1; r < d->n; ++r) {
          residues.push_back(
              Formula::atom(DivAtom{d->n, d->t - ValTerm::constant(r)}));
        }
        return Formula::disj(std::move(residues));
      }
      return f;
    }
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.kids()) kids.push_back(positivize(k, g));
      return f.kind() == K::And ? Formula::conj(std::move(kids))
                                : Formula::disj(std::move(kids));
    }
    default:
      throw internal_error(
          "value elimination expects a quantifier-free formula");
  }
}

Formula cooper(const Formula& f0, const Var& g) {
  Formula f = positivize(f0, g);

  Int lambda = 1;
  for_each_atom(f, [&](const Atom& a) {
    if (auto* le = std::get_if<ValLeAtom>(&a)) {
      Int c = gamma_coeff(le->lhs - le->rhs, g);
      if (c != 0) lambda = mp::lcm(lambda, Int(mp::abs(c)));
    } else if (auto* d = std::get_if<DivAtom>(&a)) {
      Int c = gamma_coeff(d->t, g);
      if (c != 0) lambda = mp::lcm(lambda, Int(mp::abs(c)));
    }
  });

  std::set<Var> vec, val;
  free_vars(f, vec, val);
  val.insert(g);
  // q stands for lambda * g; Div(lambda, q) restores the original range.
  Var q = fresh_var(g, val);

  auto rescale = [&](const Atom& a) -> Formula {
    if (auto* le = std::get_if<ValLeAtom>(&a)) {
      ValTerm diff = le->lhs - le->rhs;
      Int c = gamma_coeff(diff, g);
      if (c == 0) {
        if (!atom_mentions_val(a, g)) return Formula::atom(a);
        // g cancels between the sides; drop it syntactically.
        return Formula::atom(
            ValLeAtom{drop_var(diff, g), ValTerm::constant(0)});
      }
      ValTerm w = drop_var(diff, g);
      if (c > 0) {
        Int k = lambda / c;
        return Formula::atom(ValLeAtom{ValTerm::var(q), (-w).scaled(k)});
      }
      Int k = lambda / Int(-c);
      return Formula::atom(ValLeAtom{w.scaled(k), ValTerm::var(q)});
    }
    if (auto* d = std::get_if<DivAtom>(&a)) {
      Int c = gamma_coeff(d->t, g);
      if (c == 0) return Formula::atom(a);
      Int k = lambda / c;
      ValTerm w = drop_var(d->t, g);
      return Formula::atom(DivAtom{d->n * k, ValTerm::var(q) + w.scaled(k)});
    }
    if (atom_mentions_val(a, g))
      throw internal_error("unexpected atom kind under value elimination");
    return Formula::atom(a);
  };
  Formula scaled = Formula::conj(map_atoms(f, rescale),
                                 Formula::atom(DivAtom{lambda, ValTerm::var(q)}));

  Int big_d = 1;
  std::vector<ValTerm> lowers;
  for_each_atom(scaled, [&](const Atom& a) {
    if (auto* d = std::get_if<DivAtom>(&a)) {
      if (gamma_coeff(d->t, q) != 0) big_d = mp::lcm(big_d, d->n);
    } else if (auto* le = std::get_if<ValLeAtom>(&a)) {
      ValTerm diff = le->lhs - le->rhs;
      if (gamma_coeff(diff, q) < 0) {
        lowers.push_back(drop_var(diff, q) - ValTerm::constant(1));
      }
    }
  });

  if (big_d * Int(lowers.size() + 1) > 100000)
    throw unsupported_error("residue window too large in value elimination");

  Formula low_limit = map_atoms(scaled, [&](const Atom& a) -> Formula {
    if (auto* le = std::get_if<ValLeAtom>(&a)) {
      Int c = gamma_coeff(le->lhs - le->rhs, q);
      if (c > 0) return Formula::tru();
      if (c < 0) return Formula::fls();
    }
    return Formula::atom(a);
  });

  std::vector<Formula> parts;
  for (Int j = 1; j <= big_d; ++j) {
    parts.push_back(subst_val(low_limit, q, ValTerm::constant(j)));
  }
  for (const auto& b : lowers) {
    for (Int j = 1; j <= big_d; ++j) {
      parts.push_back(subst_val(scaled, q, b + ValTerm::constant(j)));
    }
  }
  return Formula::disj(std::move(parts));
}

// Finiteness case-splits on every symbol sharing an atom with g, then Cooper.
Formula elim_fin(const Formula& h, const Var& g, std::set<Var> done_vals,
                 std::set<VApp> done_vapps) {
  if (h.is_true() || h.is_false()) return h;
  std::set<Var> vals;
  std::set<VApp> vapps;
  for_each_atom(h, [&](const Atom& a) {
    if (atom_mentions_val(a, g)) atom_symbols(a, vals, vapps);
  });
  vals.erase(g);
  for (const auto& ap : vapps) {
    if (done_vapps.count(ap)) continue;
    done_vapps.insert(ap);
    Formula zero =
        Formula::conj(vanish_guard(ap),
                      elim_fin(subst_vapp(h, ap, ValTerm::infinity()), g,
                               done_vals, done_vapps));
    Formula fin = Formula::conj(Formula::negate(vanish_guard(ap)),
                                elim_fin(h, g, done_vals, done_vapps));
    return Formula::disj(std::move(zero), std::move(fin));
  }
  for (const auto& d : vals) {
    if (done_vals.count(d)) continue;
    done_vals.insert(d);
    Formula inf =
        Formula::conj(inf_guard(d),
                      elim_fin(subst_val(h, d, ValTerm::infinity()), g,
                               done_vals, done_vapps));
    Formula fin = Formula::conj(Formula::negate(inf_guard(d)),
                                elim_fin(h, g, done_vals, done_vapps));
    return Formula::disj(std::move(inf), std::move(fin));
  }
  return cooper(h, g);
}

}  // namespace

Formula infinity_split(const Formula& f) {
  return split_rec(to_nnf(f), {}, {});
}

Formula eliminate_val_var(const Formula& f, const Var& g) {
  return cooper(to_nnf(f), g);
}

Formula eliminate_val_exists(const Formula& f, const Var& g) {
  Formula h = to_nnf(f);
  Formula at_inf = subst_val(h, g, ValTerm::infinity());
  Formula finite = elim_fin(h, g, {}, {});
  return Formula::disj(std::move(at_inf), std::move(finite));
}

bool decide_ground_val(const Formula& f) { return eval_qf(f, {}); }

}  // namespace placeq
