#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "placeq/cli.hpp"

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args, std::string input = "") {
  std::istringstream in(std::move(input));
  std::ostringstream out, err;
  int code = placeq::run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("decide prints a bare verdict") {
  auto r = run({"decide", "--places", "2",
                "E x:vec. v[2](x) = 0 & v[2](x - 1) = 0"});
  CHECK(r.code == 0);
  CHECK(r.out == "false\n");

  auto t = run({"decide", "E x:vec. v[3](x) = 0 & v[3](x - 1) = 0"});
  CHECK(t.code == 0);
  CHECK(t.out == "true\n");

  auto j = run({"decide", "--format", "json", "--places", "2",
                "E x:vec. v[2](x) = 1"});
  CHECK(j.code == 0);
  CHECK(j.out == "{\"verdict\":true}\n");
}

TEST_CASE("witness prints rationals as strings") {
  auto r = run({"witness", "--places", "2,3",
                "E y:vec. 3 <= v[2](y - 1) & 2 <= v[3](y)"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"y\":\"9\"}\n");

  auto j = run({"witness", "--format", "json", "--places", "2,3",
                "E y:vec. 3 <= v[2](y - 1) & 2 <= v[3](y)"});
  CHECK(j.code == 0);
  CHECK(j.out == "{\"witness\":{\"y\":\"9\"}}\n");

  auto half = run({"witness", "--places", "2,3",
                   "E y:vec. v[2](y) + 1 = 0 & v[3](y) = 1"});
  CHECK(half.code == 0);
  CHECK(half.out == "{\"y\":\"15/2\"}\n");
}

TEST_CASE("witness on a false sentence is an error") {
  auto r = run({"witness", "--places", "2",
                "E x:vec. v[2](x) = 0 & v[2](x - 1) = 0"});
  CHECK(r.code == 1);
  CHECK(r.err.find("false") != std::string::npos);
}

TEST_CASE("exit codes sort the failure modes") {
  auto parse = run({"decide", "E x:vec. v[2](x = 0"});
  CHECK(parse.code == 2);
  CHECK(parse.err.find("line 1") != std::string::npos);

  auto real_m = run({"decide", "--places", "inf", "M[inf](x, x, x)"});
  CHECK(real_m.code == 3);

  auto outside = run({"decide", "--places", "2", "E x:vec. v[5](x) = 0"});
  CHECK(outside.code == 3);

  auto open = run({"decide", "--places", "2", "v[2](x) = 0"});
  CHECK(open.code == 4);

  auto usage = run({"frobnicate"});
  CHECK(usage.code == 2);
}

TEST_CASE("formulas arrive on stdin when no argument is given") {
  auto r = run({"decide", "--places", "2"}, "E x:vec. v[2](x) = 3\n");
  CHECK(r.code == 0);
  CHECK(r.out == "true\n");
}

TEST_CASE("eval takes an assignment") {
  auto r = run({"eval", "--places", "2,inf", "--assign", "x=6",
                "Q[2,2](x) & 0 < x"});
  CHECK(r.code == 0);
  CHECK(r.out == "false\n");

  auto t = run({"eval", "--places", "2", "--assign", "x=12", "Q[2,2](x)"});
  CHECK(t.code == 0);
  CHECK(t.out == "true\n");

  auto val = run({"eval", "--places", "2", "--assign", "x=12,g=2",
                  "g <= v[2](x)"});
  CHECK(val.code == 0);
  CHECK(val.out == "true\n");

  auto missing = run({"eval", "--places", "2", "--assign", "y=1", "v[2](x) = 0"});
  CHECK(missing.code == 4);

  auto quantified =
      run({"eval", "--places", "2", "--assign", "x=1", "E y:vec. y = x"});
  CHECK(quantified.code == 3);
}

TEST_CASE("translate rewrites between dialects") {
  auto two = run({"translate", "--to", "two", "L[2](x, y)"});
  CHECK(two.code == 0);
  CHECK(two.out == "v[2](y) <= v[2](x)\n");

  auto back = run({"translate", "--to", "one", "v[2](y) <= v[2](x)"});
  CHECK(back.code == 0);
  CHECK(back.out.find("L[2]") != std::string::npos);

  auto order = run({"translate", "--to", "l", "0 <= x"});
  CHECK(order.code == 0);
  CHECK(order.out.find("L[inf]") != std::string::npos);
}

TEST_CASE("eliminate prints a quantifier-free equivalent") {
  auto r = run({"eliminate", "--places", "2", "E x:vec. 2 <= v[2](x - y)"});
  CHECK(r.code == 0);
  CHECK(r.out.find("E ") == std::string::npos);
  CHECK(!r.out.empty());
}

TEST_CASE("gadget prints schemas and verifies them") {
  auto order = run({"gadget", "order"});
  CHECK(order.code == 0);
  CHECK(order.out.find("L[inf]") != std::string::npos);

  auto mult = run({"gadget", "mult", "--verify", "--samples", "400"});
  CHECK(mult.code == 0);
  CHECK(mult.out.find("verified on 400 samples") != std::string::npos);

  auto j = run({"gadget", "nonneg", "--format", "json", "--verify",
                "--samples", "60"});
  CHECK(j.code == 0);
  CHECK(j.out.find("\"verified\":true") != std::string::npos);
}

TEST_CASE("identical queries produce identical bytes") {
  std::vector<std::string> q = {"witness", "--places", "2,3,inf", "--seed",
                                "11",      "E y:vec. 0 < y & y < 1 & v[2](y) "
                                           "= 1 & 1 <= v[3](y - 1)"};
  auto a = run(q);
  auto b = run(q);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  setenv("PLACEQ_SEED", "7", 1);
  auto env_seeded = run({"gadget", "mult", "--verify", "--samples", "80"});
  unsetenv("PLACEQ_SEED");
  auto flag_seeded =
      run({"gadget", "mult", "--verify", "--samples", "80", "--seed", "7"});
  CHECK(env_seeded.out == flag_seeded.out);
}
