#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "placeq/combine.hpp"
#include "placeq/errors.hpp"
#include "placeq/eval.hpp"
#include "placeq/interpret.hpp"
#include "placeq/parser.hpp"

using namespace placeq;

namespace {

Signature sig23() { return Signature::parse("2,3,inf", "2,3"); }

bool dec(const char* text) { return decide(parse_formula(text), sig23()); }

/** Strips the existential prefix and evaluates the matrix at the witness. */
bool witness_checks(const char* text) {
  Formula f = parse_formula(text);
  auto w = witness(f, sig23());
  Formula body = f;
  while (body.kind() == Formula::Kind::Exists) body = body.kid(0);
  Assignment asg;
  for (const auto& [x, v] : w) asg.vec[x] = v;
  return eval_qf(to_two_sorted(l_to_order(body)), asg);
}

/** Random one-variable conjunction mixing demands at 2, 3 and the reals. */
Formula random_matrix(std::mt19937& rng, const Var& y) {
  auto pick = [&](int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  };
  int n = 2 + pick(3);
  std::vector<Formula> fs;
  for (int i = 0; i < n; ++i) {
    int kind = pick(4);
    if (kind == 3) {
      Rat c(pick(9) - 4, 1 + pick(3));
      VecTerm t = VecTerm::var(y) - VecTerm::constant(c);
      if (pick(2)) t = t.scaled(Rat(-1));
      fs.push_back(Formula::atom(OrdAtom{t, pick(2) == 0}));
      continue;
    }
    Place pl = Place::finite(pick(2) ? 3 : 2);
    Rat c(pick(7) - 3, 1 + pick(2));
    ValTerm v = ValTerm::vapp(pl, VecTerm::var(y) - VecTerm::constant(c));
    Int k = pick(6) - 2;
    Formula at;
    if (kind == 0)
      at = Formula::atom(ValLeAtom{ValTerm::constant(k), v});
    else if (kind == 1)
      at = Formula::atom(ValEqAtom{v, ValTerm::constant(k)});
    else
      at = Formula::atom(DivAtom{Int(2 + pick(2)), v});
    if (pick(4) == 0) at = Formula::negate(at);
    fs.push_back(at);
  }
  return Formula::conj(std::move(fs));
}

}  // namespace

TEST_CASE("frozen sentences across places") {
  CHECK(dec("A x:vec. A y:vec. L[2](x+y, x) | L[2](x+y, y)"));
  CHECK(dec("A x:vec. A y:vec. L[inf](x, y) | L[inf](y, x)"));
  CHECK(dec("E x:vec. !(x = 0) & L[2](2*x, x) & !L[2](x, 2*x)"));
  CHECK(!dec("E x:vec. v[2](x) = 0 & v[2](x - 1) = 0"));
  CHECK(dec("E x:vec. v[3](x) = 0 & v[3](x - 1) = 0"));
  CHECK(dec("E y:vec. 3 <= v[2](y - 1) & 2 <= v[3](y)"));
  CHECK(dec("E y:vec. 0 <= 4*y - 1 & 0 <= 3 - 4*y & v[2](y) = 1"));
  CHECK(dec("E y:vec. 3 <= v[2](y - 1/3) & 2 <= v[3](y - 1/2) & 0 < y & y < 1/10"));
  CHECK(!dec("E y:vec. 0 < y & y < 0"));
  CHECK(dec("A x:vec. E y:vec. v[2](y - x) = 5 & 0 < y - x & y - x < 1/1000"));
  CHECK(dec("E x:vec. E y:vec. M[2](x, y, 4) & v[2](x) = 1"));
  CHECK(!dec("E x:vec. E y:vec. M[2](x, y, 1) & 1 <= v[2](x) & 1 <= v[2](y)"));
  CHECK(!dec("E x:vec. Q[2,2](x) & v[2](x) = 3"));
  CHECK(dec("E x:vec. Q[2,2](x) & v[2](x) = 4"));
}

TEST_CASE("value-sort quantifiers ride along") {
  CHECK(dec("A g:val. E x:vec. v[2](x) = g"));
  CHECK(!dec("A g:val. E x:vec. !(x = 0) & v[2](x) = g"));
  CHECK(dec("A x:vec. E g:val. v[2](x) = g"));
  CHECK(dec("A g:val. E h:val. g <= h & P[3](h)"));
  CHECK(dec("E h:val. A g:val. g <= h"));
  CHECK(!dec("E h:val. A g:val. h <= g"));
}

TEST_CASE("frozen witnesses") {
  Signature sig = sig23();
  auto w1 = witness(parse_formula("E y:vec. 3 <= v[2](y - 1) & 2 <= v[3](y)"),
                    sig);
  CHECK(w1["y"] == Rat(9));
  auto w2 = witness(parse_formula("E y:vec. 0 < y & 1 <= v[2](y)"), sig);
  CHECK(w2["y"] == Rat(2));
  auto w3 = witness(
      parse_formula("E y:vec. 0 <= 4*y - 1 & 0 <= 3 - 4*y & v[2](y) = 1"),
      sig);
  CHECK(w3["y"] == Rat(2, 5));
  auto w4 = witness(parse_formula("E y:vec. v[2](y) = -1 & v[3](y) = 1"), sig);
  CHECK(vp(w4["y"], 2) == ValInt(-1));
  CHECK(vp(w4["y"], 3) == ValInt(1));
}

TEST_CASE("witnesses thread a shared linear relation") {
  CHECK(witness_checks(
      "E x:vec. E y:vec. x + y = 1 & 2 <= v[2](x - 1) & 1 <= v[3](y) & 0 < x"));
  CHECK(witness_checks(
      "E x:vec. E y:vec. y = 2*x & v[2](x) = 3 & 0 < x & x < 1/2"));
  CHECK(witness_checks(
      "E y:vec. 3 <= v[2](y - 1/3) & 2 <= v[3](y - 1/2) & 0 < y & y < 1/10"));
}

TEST_CASE("true sentences carry exact certificates") {
  std::mt19937 rng(2026);
  int produced = 0;
  for (int trial = 0; trial < 120; ++trial) {
    Formula m = random_matrix(rng, "y");
    Formula f = Formula::exists("y", Sort::Vec, m);
    if (!decide(f, sig23())) continue;
    auto w = witness(f, sig23());
    Assignment asg;
    asg.vec["y"] = w["y"];
    CHECK(eval_qf(m, asg));
    ++produced;
  }
  CHECK(produced > 30);
}

TEST_CASE("false sentences beat the bounded search") {
  std::mt19937 rng(77);
  std::vector<Int> dens = {1, 2, 3, 4, 6, 8, 9, 12, 18, 24, 36};
  int refuted = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Formula m = random_matrix(rng, "y");
    Formula f = Formula::exists("y", Sort::Vec, m);
    if (decide(f, sig23())) continue;
    for (Int num = -90; num <= 90; ++num)
      for (const Int& den : dens) {
        Assignment asg;
        asg.vec["y"] = Rat(num, den);
        if (eval_qf(m, asg)) {
          CAPTURE(m.str());
          CAPTURE(asg.vec["y"].str());
          REQUIRE(false);
        }
      }
    ++refuted;
  }
  CHECK(refuted > 10);
}

TEST_CASE("independent places decouple") {
  std::mt19937 rng(5150);
  auto pick = [&](int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  };
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Formula> parts;
    for (Int p : {Int(2), Int(3)}) {
      Place pl = Place::finite(p);
      std::vector<Formula> fs;
      int n = 1 + pick(2);
      for (int i = 0; i < n; ++i) {
        Rat c(pick(5) - 2);
        VecTerm arg = VecTerm::var("y") - VecTerm::constant(c);
        ValTerm v = ValTerm::vapp(pl, arg);
        Int k = pick(5) - 2;
        Formula at;
        int kind = pick(3);
        if (kind == 0)
          at = Formula::atom(ValLeAtom{ValTerm::constant(k), v});
        else if (kind == 1)
          at = Formula::atom(ValEqAtom{v, ValTerm::constant(k)});
        else
          at = Formula::atom(DivAtom{Int(2 + pick(2)), v});
        if (pick(4) == 0) at = Formula::negate(at);
        fs.push_back(at);
        fs.push_back(Formula::negate(Formula::atom(VecEqAtom{arg})));
      }
      parts.push_back(Formula::conj(std::move(fs)));
    }
    {
      Rat lo(pick(9) - 4), len(1 + pick(3));
      VecTerm y = VecTerm::var("y");
      parts.push_back(Formula::conj(
          Formula::atom(OrdAtom{y - VecTerm::constant(lo), true}),
          Formula::atom(OrdAtom{VecTerm::constant(lo + len) - y, true})));
    }
    bool joint = decide(
        Formula::exists("y", Sort::Vec, Formula::conj(parts)), sig23());
    bool split = true;
    for (const Formula& part : parts)
      split = split && decide(Formula::exists("y", Sort::Vec, part), sig23());
    CAPTURE(Formula::conj(parts).str());
    CHECK(joint == split);
  }
}

TEST_CASE("boolean structure is respected") {
  std::vector<const char*> texts = {
      "E y:vec. 3 <= v[2](y - 1) & 2 <= v[3](y)",
      "E x:vec. v[2](x) = 0 & v[2](x - 1) = 0",
      "A x:vec. A y:vec. L[2](x+y, x) | L[2](x+y, y)",
      "E y:vec. 0 < y & y < 0",
      "E h:val. A g:val. g <= h",
  };
  for (const char* a : texts) {
    Formula fa = parse_formula(a);
    bool da = decide(fa, sig23());
    CHECK(decide(Formula::negate(Formula::negate(fa)), sig23()) == da);
    CHECK(decide(Formula::negate(fa), sig23()) == !da);
    for (const char* b : texts) {
      Formula fb = parse_formula(b);
      bool db = decide(fb, sig23());
      CHECK(decide(Formula::conj(fa, fb), sig23()) == (da && db));
      CHECK(decide(Formula::disj(fa, fb), sig23()) == (da || db));
      CHECK(decide(Formula::implies(fa, fb), sig23()) == (!da || db));
    }
  }
}

TEST_CASE("free variables survive elimination") {
  std::vector<const char*> texts = {
      "E y:vec. v[2](y - x) = 0 & 0 < y - x & y - x < 1",
      "E y:vec. 2 <= v[2](y - x) & 1 <= v[3](y + x)",
      "E y:vec. v[3](y) = v[3](x) & 0 < y & y < x",
      "A y:vec. 0 < y | v[2](y - x) = 0 | !(y = y)",
  };
  for (const char* text : texts) {
    Formula f = parse_formula(text);
    Formula g = eliminate_all(f, sig23());
    CHECK(g.is_qf());
    for (int num = -6; num <= 6; ++num)
      for (Int den : {Int(1), Int(2), Int(3), Int(4)}) {
        Assignment asg;
        asg.vec["x"] = Rat(num, den);
        bool direct = decide(plug(f, asg), sig23());
        CAPTURE(text);
        CAPTURE(asg.vec["x"].str());
        CHECK(eval_qf(g, asg) == direct);
      }
  }
}

TEST_CASE("refused constructs") {
  Signature sig = sig23();
  CHECK_THROWS_AS(decide(parse_formula("E x:vec. v[2](x) <= v[3](x)"), sig),
                  unsupported_error);
  CHECK_THROWS_AS(decide(parse_formula("v[2](x) = 0"), sig), sort_error);
  CHECK_THROWS_AS(decide(parse_formula("E x:vec. M[inf](x, x, x)"), sig),
                  unsupported_error);
  CHECK_THROWS_AS(decide(parse_formula("E x:vec. 0 <= v[5](x)"), sig),
                  unsupported_error);
  CHECK_THROWS_AS(
      witness(parse_formula("E y:vec. 0 < y & y < 0"), sig),
      no_witness_error);
  Formula big = parse_formula("0 < a + b + c + d + e + f + g");
  for (const char* v : {"a", "b", "c", "d", "e", "f", "g"})
    big = Formula::exists(v, Sort::Vec, big);
  CHECK_THROWS_AS(decide(big, sig), unsupported_error);
  CHECK(decide(big, sig, 7));
}
