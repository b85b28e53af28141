#include "placeq/interpret.hpp"

#include <utility>
#include <vector>

namespace placeq {

namespace {

// p^c as an exact rational; c may be negative.
Rat place_power(const Place& p, const Int& c) {
  Int mag = c < 0 ? Int(-c) : c;
  if (mag > 4096) throw internal_error("unreasonable power of a uniformizer");
  Int pow = 1;
  for (Int i = 0; i < mag; ++i) pow *= p.prime();
  return c < 0 ? Rat(Int(1), pow) : Rat(pow);
}

Formula two_sorted_atom(const Atom& a) {
  if (auto* l = std::get_if<LAtom>(&a)) {
    if (l->place.is_real()) {
      throw unsupported_error(
          "L at the real place has no valuation form; translate to order "
          "atoms instead");
    }
    return Formula::atom(ValLeAtom{ValTerm::vapp(l->place, l->y),
                                   ValTerm::vapp(l->place, l->x)});
  }
  if (auto* m = std::get_if<MAtom>(&a)) {
    if (m->place.is_real()) {
      throw unsupported_error("M at the real place has no valuation form");
    }
    return Formula::atom(
        ValEqAtom{ValTerm::vapp(m->place, m->x) + ValTerm::vapp(m->place, m->y),
                  ValTerm::vapp(m->place, m->z)});
  }
  if (auto* q = std::get_if<QAtom>(&a)) {
    return Formula::atom(DivAtom{q->n, ValTerm::vapp(q->place, q->t)});
  }
  return Formula::atom(a);
}

// One side of a valuation comparison, split into the valuation applications
// counted with multiplicity and the integer offset.
struct SideParts {
  std::vector<VApp> apps;
  Int offset = 0;
};

// Positive and negative halves of lhs - rhs. Throws on value variables.
void split_sides(const ValTerm& lhs, const ValTerm& rhs, SideParts& pos,
                 SideParts& neg) {
  ValTerm diff = lhs - rhs;
  if (!diff.val_vars().empty()) {
    throw unsupported_error(
        "value variable has no one-sorted form (apply the valuation "
        "elimination first)");
  }
  pos.offset = diff.constant_part();
  for (const auto& [ap, c] : diff.vapp_coeffs()) {
    Int mag = c < 0 ? Int(-c) : c;
    if (mag > 8) throw unsupported_error("valuation coefficient too large");
    SideParts& side = c > 0 ? pos : neg;
    for (Int i = 0; i < mag; ++i) side.apps.push_back(ap);
  }
}

Place common_place(const SideParts& pos, const SideParts& neg) {
  const VApp* first = nullptr;
  for (const auto* side : {&pos, &neg}) {
    for (const auto& ap : side->apps) {
      if (!first) {
        first = &ap;
      } else if (ap.place != first->place) {
        throw unsupported_error(
            "valuation comparison across places has no one-sorted form");
      }
    }
  }
  if (!first) throw internal_error("valuation atom with no applications");
  return first->place;
}

// v_p(t) + n <= v_p(t') + m as an L atom with nonnegative uniformizer powers.
Formula le_two_apps(const Place& p, const VecTerm& t, const Int& n,
                    const VecTerm& t2, const Int& m) {
  Int shift = n < m ? n : m;
  Rat fn = place_power(p, n - shift);
  Rat fm = place_power(p, m - shift);
  return Formula::atom(LAtom{p, t2.scaled(fm), t.scaled(fn)});
}

// lhs <= rhs over single valuations with integer offsets.
Formula one_sorted_le(const ValLeAtom& a) {
  SideParts pos, neg;
  split_sides(a.lhs, a.rhs, pos, neg);
  Place p = common_place(pos, neg);
  // v(t) + d <= v(t'), with either valuation possibly a constant power.
  if (pos.apps.size() == 1 && neg.apps.size() == 1) {
    return le_two_apps(p, pos.apps[0].arg, pos.offset, neg.apps[0].arg, 0);
  }
  if (pos.apps.size() == 1 && neg.apps.empty()) {
    // v(t) <= -d
    return Formula::atom(
        LAtom{p, VecTerm::constant(place_power(p, -pos.offset)),
              pos.apps[0].arg});
  }
  if (pos.apps.empty() && neg.apps.size() == 1) {
    // d <= v(t')
    return Formula::atom(
        LAtom{p, neg.apps[0].arg,
              VecTerm::constant(place_power(p, pos.offset))});
  }
  throw unsupported_error(
      "valuation sum in an inequality has no one-sorted form");
}

Formula one_sorted_eq(const ValEqAtom& a) {
  if (a.rhs.is_infinite()) {
    // A finite sum of valuations is oo iff some argument vanishes.
    if (!a.lhs.val_vars().empty()) {
      throw unsupported_error(
          "value variable has no one-sorted form (apply the valuation "
          "elimination first)");
    }
    std::vector<Formula> cases;
    for (const auto& entry : a.lhs.vapp_coeffs()) {
      cases.push_back(Formula::atom(VecEqAtom{entry.first.arg}));
    }
    if (cases.empty()) throw internal_error("ground oo equation not folded");
    return Formula::disj(std::move(cases));
  }
  SideParts pos, neg;
  split_sides(a.lhs, a.rhs, pos, neg);
  if (pos.apps.size() < neg.apps.size() ||
      (pos.apps.size() == neg.apps.size() && pos.offset > 0)) {
    std::swap(pos, neg);
    pos.offset = -neg.offset;
    neg.offset = 0;
  } else {
    neg.offset = 0;
  }
  Place p = common_place(pos, neg);
  Int d = pos.offset;
  if (pos.apps.size() == 2 && neg.apps.size() <= 1) {
    // v(t1) + v(t2) + d = v(t3), where t3 may be the constant 1.
    VecTerm t1 = pos.apps[0].arg;
    VecTerm t2 = pos.apps[1].arg;
    VecTerm t3 = neg.apps.empty() ? VecTerm::constant(Rat(1))
                                  : neg.apps[0].arg;
    if (d > 0) {
      t1 = t1.scaled(place_power(p, d));
    } else if (d < 0) {
      t3 = t3.scaled(place_power(p, -d));
    }
    return Formula::atom(MAtom{p, t1, t2, t3});
  }
  if (pos.apps.size() == 1 && neg.apps.size() == 1) {
    // v(t) + d = v(t'): both L directions.
    return Formula::conj(
        le_two_apps(p, pos.apps[0].arg, d, neg.apps[0].arg, Int(0)),
        le_two_apps(p, neg.apps[0].arg, Int(0), pos.apps[0].arg, d));
  }
  if (pos.apps.size() == 1 && neg.apps.empty()) {
    // v(t) = -d
    VecTerm pw = VecTerm::constant(place_power(p, -d));
    return Formula::conj(
        Formula::atom(LAtom{p, pos.apps[0].arg, pw}),
        Formula::atom(LAtom{p, pw, pos.apps[0].arg}));
  }
  throw unsupported_error(
      "valuation sum in an equality has no one-sorted form");
}

Formula one_sorted_div(const DivAtom& a) {
  if (!a.t.val_vars().empty()) {
    throw unsupported_error(
        "value variable has no one-sorted form (apply the valuation "
        "elimination first)");
  }
  const auto& apps = a.t.vapp_coeffs();
  if (apps.size() != 1) {
    throw unsupported_error(
        "divisibility of a valuation sum has no one-sorted form");
  }
  const auto& [ap, coef] = *apps.begin();
  Int c = ((a.t.constant_part() % a.n) + a.n) % a.n;
  if (coef == a.n) {
    // P_n(n v(t) + c) holds iff n | c or t = 0.
    if (c == 0) return Formula::tru();
    return Formula::atom(VecEqAtom{ap.arg});
  }
  if (coef != 1) {
    throw unsupported_error(
        "scaled valuation under a divisibility predicate has no one-sorted "
        "form");
  }
  return Formula::atom(
      QAtom{ap.place, a.n, ap.arg.scaled(place_power(ap.place, c))});
}

Formula one_sorted_atom(const Atom& a) {
  if (auto* le = std::get_if<ValLeAtom>(&a)) return one_sorted_le(*le);
  if (auto* eq = std::get_if<ValEqAtom>(&a)) return one_sorted_eq(*eq);
  if (auto* d = std::get_if<DivAtom>(&a)) return one_sorted_div(*d);
  return Formula::atom(a);
}

Formula order_atom_to_l(const Atom& a) {
  if (auto* o = std::get_if<OrdAtom>(&a)) {
    if (!o->strict) {
      VecTerm one = VecTerm::constant(Rat(1));
      return Formula::atom(LAtom{Place::real(), o->t - one, o->t + one});
    }
    // 0 < t is the negation of 0 <= -t.
    VecTerm neg = -o->t;
    VecTerm one = VecTerm::constant(Rat(1));
    return Formula::negate(
        Formula::atom(LAtom{Place::real(), neg - one, neg + one}));
  }
  return Formula::atom(a);
}

Formula l_atom_to_order(const Atom& a) {
  if (auto* l = std::get_if<LAtom>(&a)) {
    if (l->place.is_real()) {
      const VecTerm& x = l->x;
      const VecTerm& y = l->y;
      auto ge = [](VecTerm t) { return Formula::atom(OrdAtom{std::move(t)}); };
      return Formula::disj(
          {Formula::conj(ge(y - x), ge(x)), Formula::conj(ge(y + x), ge(-x)),
           Formula::conj(ge(-y - x), ge(x)),
           Formula::conj(ge(-y + x), ge(-x))});
    }
  }
  if (auto* m = std::get_if<MAtom>(&a)) {
    if (m->place.is_real()) {
      throw unsupported_error("M at the real place has no order form");
    }
  }
  return Formula::atom(a);
}

}  // namespace

Formula to_two_sorted(const Formula& f) {
  return map_atoms(f, two_sorted_atom);
}

Formula to_one_sorted(const Formula& f) {
  return map_atoms(f, one_sorted_atom);
}

Formula order_to_l(const Formula& f) { return map_atoms(f, order_atom_to_l); }

Formula l_to_order(const Formula& f) { return map_atoms(f, l_atom_to_order); }

Formula translate(const Formula& f, TranslationDirection dir) {
  switch (dir) {
    case TranslationDirection::OneToTwo:
      return to_two_sorted(f);
    case TranslationDirection::TwoToOne:
      return to_one_sorted(f);
    case TranslationDirection::OrderToL:
      return order_to_l(f);
    case TranslationDirection::LToOrder:
      return l_to_order(f);
  }
  throw internal_error("translate: unreachable");
}

}  // namespace placeq
