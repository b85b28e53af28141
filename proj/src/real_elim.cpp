#include "placeq/real_elim.hpp"

#include <optional>
#include <utility>

namespace placeq {

namespace {

bool lit_mentions_vec(const Lit& l, const Var& x) {
  std::set<Var> vec, val;
  atom_vars(l.atom, vec, val);
  return vec.count(x) != 0;
}

// -r/c for the x-part split t = c*x + r.
VecTerm boundary(const VecTerm& t, const Var& x, const Rat& c) {
  VecTerm r = t.subst(x, VecTerm::constant(Rat(0)));
  return r.scaled(Rat(-1) / c);
}

struct RealBound {
  VecTerm term;
  bool strict;
};

}  // namespace

Formula eliminate_vec_var_real(const std::vector<Lit>& conj, const Var& x) {
  for (std::size_t i = 0; i < conj.size(); ++i) {
    const Lit& l = conj[i];
    if (l.neg || !std::holds_alternative<VecEqAtom>(l.atom)) continue;
    if (!lit_mentions_vec(l, x)) continue;
    const VecTerm& t = std::get<VecEqAtom>(l.atom).t;
    VecTerm pin = boundary(t, x, t.coeff(x));
    std::vector<Formula> rest;
    for (std::size_t j = 0; j < conj.size(); ++j) {
      if (j == i) continue;
      rest.push_back(subst_vec(lit_formula(conj[j]), x, pin));
    }
    return Formula::conj(std::move(rest));
  }

  std::vector<Formula> out;
  std::vector<RealBound> lowers, uppers;
  for (const Lit& l : conj) {
    if (!lit_mentions_vec(l, x)) {
      out.push_back(lit_formula(l));
      continue;
    }
    if (l.neg) {
      throw internal_error(
          "negated literal on the eliminated variable reached the real "
          "eliminator");
    }
    const auto* o = std::get_if<OrdAtom>(&l.atom);
    if (!o) {
      throw internal_error(
          "non-order atom on the eliminated variable reached the real "
          "eliminator");
    }
    Rat c = o->t.coeff(x);
    RealBound b{boundary(o->t, x, c), o->strict};
    (c.sign() > 0 ? lowers : uppers).push_back(std::move(b));
  }
  for (const RealBound& lo : lowers) {
    for (const RealBound& hi : uppers) {
      out.push_back(
          Formula::atom(OrdAtom{hi.term - lo.term, lo.strict || hi.strict}));
    }
  }
  return Formula::conj(std::move(out));
}

Rat witness_real(const std::vector<Lit>& conj, const Var& x,
                 const Assignment& asg) {
  std::optional<Rat> pin;
  std::optional<Rat> lo, hi;
  bool lo_strict = false, hi_strict = false;

  for (const Lit& l : conj) {
    if (!lit_mentions_vec(l, x)) continue;
    const VecTerm* t = nullptr;
    bool strict = false;
    bool is_eq = false;
    if (const auto* o = std::get_if<OrdAtom>(&l.atom)) {
      t = &o->t;
      strict = o->strict;
    } else if (const auto* e = std::get_if<VecEqAtom>(&l.atom)) {
      t = &e->t;
      is_eq = true;
    }
    if (!t || l.neg) {
      throw internal_error(
          "unexpected literal on the witness variable at the real place");
    }
    Rat c = t->coeff(x);
    VecTerm rsym = t->subst(x, VecTerm::constant(Rat(0)));
    Rat r = rsym.constant_part();
    for (const auto& [v, cv] : rsym.coeffs()) {
      auto it = asg.vec.find(v);
      if (it == asg.vec.end())
        throw internal_error("real witness with unassigned parameter " + v);
      r = r + cv * it->second;
    }
    Rat b = -r / c;
    if (is_eq) {
      if (pin && *pin != b) throw no_witness_error("conflicting pins on " + x);
      pin = b;
    } else if (c.sign() > 0) {
      if (!lo || b > *lo || (b == *lo && strict)) {
        lo = b;
        lo_strict = strict;
      }
    } else {
      if (!hi || b < *hi || (b == *hi && strict)) {
        hi = b;
        hi_strict = strict;
      }
    }
  }

  Rat w;
  if (pin) {
    w = *pin;
  } else if (lo && hi) {
    if (*lo < *hi) {
      w = (*lo + *hi) / Rat(2);
    } else if (*lo == *hi && !lo_strict && !hi_strict) {
      w = *lo;
    } else {
      throw no_witness_error("empty interval for " + x);
    }
  } else if (lo) {
    w = *lo + Rat(1);
  } else if (hi) {
    w = *hi - Rat(1);
  } else {
    w = Rat(0);
  }

  Assignment full = asg;
  full.vec[x] = w;
  for (const Lit& l : conj) {
    if (!eval_qf(lit_formula(l), full)) {
      throw no_witness_error("real witness fails literal " + atom_str(l.atom));
    }
  }
  return w;
}

}  // namespace placeq
