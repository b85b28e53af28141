#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "placeq/eval.hpp"
#include "placeq/interpret.hpp"
#include "placeq/parser.hpp"

using namespace placeq;

namespace {

bool same(const Formula& f, const char* expected) {
  return alpha_equal(f, parse_formula(expected));
}

bool contains_l_atom(const Formula& f) {
  bool saw = false;
  map_atoms(f, [&saw](const Atom& a) {
    if (std::holds_alternative<LAtom>(a)) saw = true;
    return Formula::atom(a);
  });
  return saw;
}

}  // namespace

TEST_CASE("finite predicates become valuation atoms") {
  CHECK(same(to_two_sorted(parse_formula("L[2](x, 1)")), "0 <= v[2](x)"));
  CHECK(same(to_two_sorted(parse_formula("L[2](x, y)")),
             "v[2](y) <= v[2](x)"));
  CHECK(same(to_two_sorted(parse_formula("M[3](x, x, y)")),
             "v[3](x) + v[3](x) = v[3](y)"));
  CHECK(same(to_two_sorted(parse_formula("Q[5, 2](x)")), "P[2](v[5](x))"));
}

TEST_CASE("order atoms and equalities pass through") {
  CHECK(same(to_two_sorted(parse_formula("0 <= x & x = y")), "0 <= x & x = y"));
  CHECK(same(to_two_sorted(parse_formula("E x:vec. L[2](x, y)")),
             "E x:vec. v[2](y) <= v[2](x)"));
}

TEST_CASE("real L and M have no valuation form") {
  CHECK_THROWS_AS(to_two_sorted(parse_formula("L[inf](x, y)")),
                  unsupported_error);
  CHECK_THROWS_AS(to_two_sorted(parse_formula("M[inf](x, y, z)")),
                  unsupported_error);
}

TEST_CASE("valuation comparisons map back to L") {
  CHECK(same(to_one_sorted(parse_formula("v[2](y) <= v[2](x)")), "L[2](x, y)"));
  CHECK(same(to_one_sorted(parse_formula("v[2](x) = v[2](y) + 1")),
             "L[2](2*y, x) & L[2](x, 2*y)"));
  CHECK(same(to_one_sorted(parse_formula("v[2](x) <= 3")), "L[2](8, x)"));
  CHECK(same(to_one_sorted(parse_formula("3 <= v[2](x)")), "L[2](x, 8)"));
  CHECK(same(to_one_sorted(parse_formula("v[2](x) <= -1")), "L[2](1/2, x)"));
  CHECK(same(to_one_sorted(parse_formula("v[2](x) = oo")), "x = 0"));
}

TEST_CASE("valuation sums map back to M") {
  CHECK(same(to_one_sorted(parse_formula("v[3](x) + v[3](x) = v[3](y)")),
             "M[3](x, x, y)"));
  CHECK(same(to_one_sorted(parse_formula("v[3](x) + v[3](y) = v[3](z) + 2")),
             "M[3](x, y, 9*z)"));
  CHECK(same(to_one_sorted(parse_formula("v[2](x) + v[2](y) = 1")),
             "M[2](x, y, 2)"));
  CHECK(same(to_one_sorted(parse_formula("v[2](x) + v[2](y) = -1")),
             "M[2](2*x, y, 1)"));
}

TEST_CASE("value divisibility maps back to Q") {
  CHECK(same(to_one_sorted(parse_formula("P[2](v[5](x))")), "Q[5, 2](x)"));
  CHECK(same(to_one_sorted(parse_formula("P[2](v[5](x) + 1)")),
             "Q[5, 2](5*x)"));
  CHECK(to_one_sorted(parse_formula("P[2](v[5](x) + v[5](x))")).is_true());
}

TEST_CASE("shapes outside the surface language are refused") {
  CHECK_THROWS_AS(to_one_sorted(parse_formula("P[3](v[2](x) + v[2](x))")),
                  unsupported_error);
  CHECK_THROWS_AS(
      to_one_sorted(parse_formula("v[2](x) + v[2](y) <= v[2](z)")),
      unsupported_error);
  CHECK_THROWS_AS(to_one_sorted(parse_formula("v[2](x) <= v[3](x)")),
                  unsupported_error);
  CHECK_THROWS_AS(to_one_sorted(parse_formula("v[2](x) = g")),
                  unsupported_error);
}

TEST_CASE("order atoms and their L encodings") {
  CHECK(same(order_to_l(parse_formula("0 <= x")), "L[inf](x - 1, x + 1)"));
  CHECK(same(order_to_l(parse_formula("0 < x")),
             "!L[inf](-x - 1, -x + 1)"));
  Formula f = parse_formula("0 <= x - 2*y + 1 & 0 < y");
  auto rep = check_equiv_sampled(f, order_to_l(f), 300, 11);
  CHECK(rep.equivalent);
  auto back = check_equiv_sampled(f, l_to_order(order_to_l(f)), 300, 11);
  CHECK(back.equivalent);
}

TEST_CASE("real L unfolds into sign cases") {
  Formula f = parse_formula("L[inf](x, y)");
  Formula g = l_to_order(f);
  CHECK(!contains_l_atom(g));
  auto rep = check_equiv_sampled(f, g, 400, 5);
  CHECK(rep.equivalent);
  CHECK(same(l_to_order(parse_formula("L[2](x, y)")), "L[2](x, y)"));
  CHECK_THROWS_AS(l_to_order(parse_formula("M[inf](x, y, z)")),
                  unsupported_error);
}

TEST_CASE("translations preserve truth on samples") {
  const char* one_sorted[] = {
      "L[2](x, y)",
      "M[3](x, y, z)",
      "Q[5, 3](x + 2)",
      "L[2](x + y, 2*x) | !Q[3, 2](y)",
      "M[2](x, x, y) & L[2](y, x)",
  };
  for (const char* text : one_sorted) {
    Formula f = parse_formula(text);
    auto rep = check_equiv_sampled(f, to_two_sorted(f), 200, 23);
    INFO(text);
    CHECK(rep.equivalent);
  }
  const char* two_sorted[] = {
      "v[2](x) = v[2](y) + 1",
      "v[2](x) + 2 <= v[2](y)",
      "P[2](v[5](x) + 1)",
      "v[3](x) + v[3](y) = v[3](z) + 2",
      "v[2](x) + v[2](y) = 1",
      "v[2](x) = oo | 0 <= v[2](x + 1)",
  };
  for (const char* text : two_sorted) {
    Formula f = parse_formula(text);
    auto rep = check_equiv_sampled(f, to_one_sorted(f), 200, 23);
    INFO(text);
    CHECK(rep.equivalent);
  }
}

TEST_CASE("round trips reproduce the surface form") {
  for (const char* text : {"L[2](x, y)", "Q[5, 2](x)", "M[3](x, y, z)"}) {
    Formula f = parse_formula(text);
    CHECK(alpha_equal(to_one_sorted(to_two_sorted(f)), f));
  }
  Formula g = parse_formula("v[2](x) + 2 <= v[2](y)");
  auto rep = check_equiv_sampled(g, to_two_sorted(to_one_sorted(g)), 300, 9);
  CHECK(rep.equivalent);
}

TEST_CASE("translate dispatches on direction") {
  Formula f = parse_formula("L[2](x, y)");
  CHECK(alpha_equal(translate(f, TranslationDirection::OneToTwo),
                    to_two_sorted(f)));
  Formula g = parse_formula("0 <= x");
  CHECK(alpha_equal(translate(g, TranslationDirection::OrderToL),
                    order_to_l(g)));
}
