#include <sstream>

#include "placeq/formula.hpp"

namespace placeq {

namespace {

// Comparison atoms swallow a following '!' less obviously, so negations of
// them are printed with explicit parentheses.
bool bracketed_atom(const Atom& a) {
  return std::holds_alternative<DivAtom>(a) || std::holds_alternative<LAtom>(a) ||
         std::holds_alternative<MAtom>(a) || std::holds_alternative<QAtom>(a);
}

// Grammar levels: 0 formula, 1 implication, 2 disjunction, 3 conjunction,
// 4 literal.
int level(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Exists:
    case K::Forall:
      return 0;
    case K::Implies:
      return 1;
    case K::Or:
      return 2;
    case K::And:
      return 3;
    default:
      return 4;
  }
}

void print_rec(std::ostringstream& os, const Formula& f, int require) {
  using K = Formula::Kind;
  if (level(f) < require) {
    os << "(";
    print_rec(os, f, 0);
    os << ")";
    return;
  }
  switch (f.kind()) {
    case K::True:
      os << "0 = 0";
      return;
    case K::False:
      os << "1 = 0";
      return;
    case K::Atm:
      os << atom_str(f.get_atom());
      return;
    case K::Not: {
      const Formula& k = f.kid();
      if (k.kind() == K::Atm && bracketed_atom(k.get_atom())) {
        os << "!" << atom_str(k.get_atom());
      } else {
        os << "!(";
        print_rec(os, k, 0);
        os << ")";
      }
      return;
    }
    case K::And: {
      bool first = true;
      for (const auto& k : f.kids()) {
        if (!first) os << " & ";
        first = false;
        print_rec(os, k, 4);
      }
      return;
    }
    case K::Or: {
      bool first = true;
      for (const auto& k : f.kids()) {
        if (!first) os << " | ";
        first = false;
        print_rec(os, k, 3);
      }
      return;
    }
    case K::Implies:
      print_rec(os, f.kid(0), 2);
      os << " -> ";
      print_rec(os, f.kid(1), 1);
      return;
    case K::Exists:
    case K::Forall:
      os << (f.kind() == K::Exists ? "E " : "A ") << f.qvar() << ":"
         << (f.qsort() == Sort::Vec ? "vec" : "val") << ". ";
      print_rec(os, f.kid(), 0);
      return;
  }
}

}  // namespace

std::string atom_str(const Atom& a) {
  std::ostringstream os;
  if (auto* e = std::get_if<VecEqAtom>(&a)) {
    os << e->t.str() << " = 0";
  } else if (auto* o = std::get_if<OrdAtom>(&a)) {
    os << "0 " << (o->strict ? "<" : "<=") << " " << o->t.str();
  } else if (auto* le = std::get_if<ValLeAtom>(&a)) {
    os << le->lhs.str() << " <= " << le->rhs.str();
  } else if (auto* eq = std::get_if<ValEqAtom>(&a)) {
    os << eq->lhs.str() << " = " << eq->rhs.str();
  } else if (auto* d = std::get_if<DivAtom>(&a)) {
    os << "P[" << d->n.str() << "](" << d->t.str() << ")";
  } else if (auto* l = std::get_if<LAtom>(&a)) {
    os << "L[" << l->place.str() << "](" << l->x.str() << ", " << l->y.str()
       << ")";
  } else if (auto* m = std::get_if<MAtom>(&a)) {
    os << "M[" << m->place.str() << "](" << m->x.str() << ", " << m->y.str()
       << ", " << m->z.str() << ")";
  } else if (auto* q = std::get_if<QAtom>(&a)) {
    os << "Q[" << q->place.str() << ", " << q->n.str() << "](" << q->t.str()
       << ")";
  }
  return os.str();
}

std::string Formula::str() const {
  std::ostringstream os;
  print_rec(os, *this, 0);
  return os.str();
}

}  // namespace placeq
