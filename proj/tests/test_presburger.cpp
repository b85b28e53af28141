#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "placeq/eval.hpp"
#include "placeq/parser.hpp"
#include "placeq/presburger.hpp"

using namespace placeq;

namespace {

Formula body(const char* text) {
  Formula f = parse_formula(text);
  while (f.kind() == Formula::Kind::Exists ||
         f.kind() == Formula::Kind::Forall) {
    f = f.kid();
  }
  return f;
}

bool mentions_val_var(const Formula& f, const char* g) {
  std::set<Var> vec, val;
  free_vars(f, vec, val);
  return val.count(g) != 0;
}

Assignment val1(const char* g, ValInt v) {
  Assignment a;
  a.val[g] = std::move(v);
  return a;
}

// Random conjunction/disjunction of linear atoms in g and d for the window
// oracle. Kept positive-or-negated at the literal level.
Formula random_val_formula(std::mt19937_64& rng) {
  auto coeff = [&rng]() { return Int((long long)(rng() % 7) - 3); };
  auto konst = [&rng]() { return Int((long long)(rng() % 11) - 5); };
  auto term = [&]() {
    return ValTerm::var("g").scaled(coeff()) +
           ValTerm::var("d").scaled(coeff()) + ValTerm::constant(konst());
  };
  auto atom = [&]() -> Formula {
    switch (rng() % 4) {
      case 0:
        return Formula::atom(ValLeAtom{term(), term()});
      case 1:
        return Formula::atom(ValEqAtom{term(), term()});
      case 2:
        return Formula::atom(
            DivAtom{Int(2 + (long long)(rng() % 3)), term()});
      default:
        return Formula::negate(Formula::atom(ValLeAtom{term(), term()}));
    }
  };
  Formula a = atom(), b = atom(), c = atom();
  switch (rng() % 3) {
    case 0:
      return Formula::conj({a, b, c});
    case 1:
      return Formula::conj(a, Formula::disj(b, c));
    default:
      return Formula::disj(Formula::conj(a, b), c);
  }
}

}  // namespace

TEST_CASE("shifted copies of a variable always have solutions") {
  Formula f = body("E g:val. g = d + 3");
  CHECK(eliminate_val_var(f, "g").is_true());
}

TEST_CASE("doubling introduces a parity constraint") {
  Formula f = body("E g:val. g + g = d");
  Formula out = eliminate_val_var(f, "g");
  CHECK(!mentions_val_var(out, "g"));
  Formula parity = body("P[2](d)");
  for (long long k = -8; k <= 8; ++k) {
    CAPTURE(k);
    CHECK(eval_qf(out, val1("d", ValInt(k))) ==
          eval_qf(parity, val1("d", ValInt(k))));
  }
}

TEST_CASE("an open interval needs width two") {
  Formula f = body("E g:val. d1 < g & g < d2");
  Formula out = eliminate_val_var(f, "g");
  for (long long a = -6; a <= 6; ++a) {
    for (long long b = -6; b <= 6; ++b) {
      Assignment asg;
      asg.val["d1"] = ValInt(a);
      asg.val["d2"] = ValInt(b);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(eval_qf(out, asg) == (a + 2 <= b));
    }
  }
}

TEST_CASE("elimination matches a bounded search oracle") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 40; ++trial) {
    Formula f = random_val_formula(rng);
    Formula out = eliminate_val_var(f, "g");
    CHECK(!mentions_val_var(out, "g"));
    // All output divisibilities carry a modulus of at least two.
    bool all_moduli_ok = true;
    map_atoms(out, [&](const Atom& a) {
      if (auto* d = std::get_if<DivAtom>(&a)) {
        if (d->n < 2) all_moduli_ok = false;
      }
      return Formula::atom(a);
    });
    CHECK(all_moduli_ok);
    for (long long dv = -8; dv <= 8; dv += 2) {
      Assignment asg;
      asg.val["d"] = ValInt(dv);
      bool predicted = eval_qf(out, asg);
      bool found = false;
      for (long long gv = -300; gv <= 300 && !found; ++gv) {
        asg.val["g"] = ValInt(gv);
        if (eval_qf(f, asg)) found = true;
      }
      asg.val.erase("g");
      CAPTURE(trial);
      CAPTURE(dv);
      CHECK(predicted == found);
    }
  }
}

TEST_CASE("comparisons against a vanishing argument collapse") {
  CHECK(parse_formula("v[2](x) <= v[2](0)").is_true());
  Formula f = parse_formula("v[2](0) <= v[2](x)");
  CHECK(alpha_equal(infinity_split(f), parse_formula("x = 0")));
  CHECK(parse_formula("P[3](v[2](0))").is_true());
}

TEST_CASE("infinity split preserves truth pointwise") {
  const char* cases[] = {
      "v[2](x) <= g",
      "g = v[3](x + 1) | P[2](g + 1)",
      "v[2](x) = v[2](y) & !(g <= v[2](x))",
      "!(v[5](x) = g) & g <= 3",
  };
  std::vector<ValInt> gs = {ValInt::infinity(), ValInt(-2), ValInt(0),
                            ValInt(1), ValInt(3)};
  std::vector<Rat> xs = {Rat(0),          Rat(1), Rat(2),  Rat(4),
                         Rat(Int(1), Int(2)), Rat(9), Rat(-3), Rat(5)};
  for (const char* text : cases) {
    Formula f = parse_formula(text);
    Formula split = infinity_split(f);
    std::set<Var> vec, val;
    free_vars(f, vec, val);
    // Only bare-variable guards may still mention oo.
    bool guards_only = true;
    map_atoms(split, [&](const Atom& a) {
      if (auto* eq = std::get_if<ValEqAtom>(&a)) {
        if (eq->rhs.is_infinite()) {
          bool bare = !eq->lhs.is_infinite() && eq->lhs.constant_part() == 0 &&
                      eq->lhs.vapp_coeffs().empty() &&
                      eq->lhs.var_coeffs().size() == 1 &&
                      eq->lhs.var_coeffs().begin()->second == 1;
          if (!bare) guards_only = false;
        }
        if (eq->lhs.is_infinite()) guards_only = false;
      }
      return Formula::atom(a);
    });
    CHECK(guards_only);
    for (const auto& gv : gs) {
      for (const auto& xv : xs) {
        for (const auto& yv : xs) {
          Assignment asg;
          for (const auto& v : vec) asg.vec[v] = v == "x" ? xv : yv;
          for (const auto& v : val) asg.val[v] = gv;
          CAPTURE(text);
          CHECK(eval_qf(f, asg) == eval_qf(split, asg));
        }
      }
    }
  }
}

TEST_CASE("existentials over the full value sort") {
  Formula up = body("E g:val. d <= g");
  CHECK(eliminate_val_exists(up, "g").is_true());

  Formula fin = body("E g:val. d <= g & !(g = oo)");
  Formula out = eliminate_val_exists(fin, "g");
  CHECK(!eval_qf(out, val1("d", ValInt::infinity())));
  CHECK(eval_qf(out, val1("d", ValInt(5))));
  CHECK(eval_qf(out, val1("d", ValInt(-100))));

  Formula par = body("E g:val. g + g = d");
  Formula pout = eliminate_val_exists(par, "g");
  CHECK(eval_qf(pout, val1("d", ValInt::infinity())));
  CHECK(eval_qf(pout, val1("d", ValInt(4))));
  CHECK(!eval_qf(pout, val1("d", ValInt(3))));
}

TEST_CASE("existentials around valuation applications") {
  // g between v2(x) and v2(x) + 1 exists for every x, including x = 0.
  Formula f = body("E g:val. v[2](x) <= g & g <= v[2](x) + 1");
  Formula out = eliminate_val_exists(f, "g");
  for (const char* x : {"0", "1", "6", "1/2"}) {
    Assignment asg;
    asg.vec["x"] = Rat::parse(x);
    CAPTURE(x);
    CHECK(eval_qf(out, asg));
  }
  // Strictly above v2(x) but below v2(x) + 1: impossible for finite v2(x),
  // and at x = 0 both bounds sit at oo, which the strict bound rules out.
  Formula g2 = body("E g:val. v[2](x) < g & g < v[2](x) + 1");
  Formula out2 = eliminate_val_exists(g2, "g");
  for (const char* x : {"0", "1", "6", "1/2"}) {
    Assignment asg;
    asg.vec["x"] = Rat::parse(x);
    CAPTURE(x);
    CHECK(!eval_qf(out2, asg));
  }
}

TEST_CASE("ground sentences evaluate directly") {
  CHECK(decide_ground_val(parse_formula("P[2](4)")));
  CHECK(!decide_ground_val(parse_formula("3 <= 2")));
  CHECK(decide_ground_val(parse_formula("P[3](v[2](8))")));
  CHECK(!decide_ground_val(parse_formula("P[2](v[3](9) + 1)")));
}
