#include "placeq/gadgets.hpp"

#include <vector>

#include "placeq/errors.hpp"

namespace placeq {

namespace {

/* 0 <= t, as |t - 1| <= |t + 1|. */
Formula phi(const VecTerm& t) {
  VecTerm one = VecTerm::constant(Rat(1));
  return Formula::atom(LAtom{Place::real(), t - one, t + one});
}

Formula psi(const VecTerm& a, const VecTerm& b, const VecTerm& c) {
  return Formula::conj(phi(a), Formula::conj(phi(b), phi(c)));
}

}  // namespace

Formula emit_gadget(GadgetKind kind) {
  VecTerm x = VecTerm::var("x"), y = VecTerm::var("y"), z = VecTerm::var("z");
  switch (kind) {
    case GadgetKind::OrderFromL: {
      VecTerm one = VecTerm::constant(Rat(1));
      return Formula::atom(LAtom{Place::real(), y - x - one, y - x + one});
    }
    case GadgetKind::NonNeg:
      return phi(x);
    case GadgetKind::MultiplicationFromM: {
      Formula m = Formula::atom(MAtom{Place::real(), x, y, z});
      Formula signs = Formula::disj(
          Formula::disj(psi(x, y, z), psi(x.scaled(Rat(-1)),
                                          y.scaled(Rat(-1)), z)),
          Formula::disj(psi(x.scaled(Rat(-1)), y, z.scaled(Rat(-1))),
                        psi(x, y.scaled(Rat(-1)), z.scaled(Rat(-1)))));
      return Formula::conj(m, signs);
    }
  }
  throw internal_error("unhandled gadget kind");
}

EquivReport verify_gadget(GadgetKind kind, int samples, std::uint64_t seed) {
  Formula g = emit_gadget(kind);
  int arity = kind == GadgetKind::NonNeg ? 1 : (kind == GadgetKind::OrderFromL ? 2 : 3);
  const char* names[] = {"x", "y", "z"};

  auto truth = [&](const Assignment& a) {
    const Rat& x = a.vec.at("x");
    switch (kind) {
      case GadgetKind::OrderFromL:
        return x <= a.vec.at("y");
      case GadgetKind::NonNeg:
        return Rat(0) <= x;
      case GadgetKind::MultiplicationFromM:
        return x * a.vec.at("y") == a.vec.at("z");
    }
    throw internal_error("unhandled gadget kind");
  };

  EquivReport rep;
  auto check = [&](const Assignment& a) {
    ++rep.samples;
    if (eval_qf(g, a) != truth(a)) {
      rep.equivalent = false;
      rep.counterexample = a;
      return false;
    }
    return true;
  };

  std::vector<Rat> grid = {Rat(-2), Rat(-1), Rat(-1, 3), Rat(0),
                           Rat(1, 2), Rat(1), Rat(3)};
  std::vector<std::size_t> idx(arity, 0);
  for (;;) {
    Assignment a;
    for (int i = 0; i < arity; ++i) a.vec[names[i]] = grid[idx[i]];
    if (!check(a)) return rep;
    int i = 0;
    while (i < arity && ++idx[i] == grid.size()) idx[i++] = 0;
    if (i == arity) break;
  }

  Sampler sampler(g, seed);
  bool exact = false;
  while (rep.samples < samples) {
    Assignment a;
    for (int i = 0; i < arity; ++i) a.vec[names[i]] = sampler.next_rat();
    if (kind == GadgetKind::MultiplicationFromM && (exact = !exact))
      a.vec["z"] = a.vec["x"] * a.vec["y"];
    if (!check(a)) return rep;
  }
  return rep;
}

}  // namespace placeq
