#include "placeq/cli.hpp"

#include <cctype>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acceptance/suite.hpp"
#include "json.hpp"
#include "placeq/combine.hpp"
#include "placeq/errors.hpp"
#include "placeq/eval.hpp"
#include "placeq/formula.hpp"
#include "placeq/gadgets.hpp"
#include "placeq/interpret.hpp"
#include "placeq/parser.hpp"
#include "placeq/rat.hpp"
#include "placeq/validate.hpp"

namespace placeq {
namespace {

struct Options {
  std::string places;
  std::string m_places;
  std::string format = "text";
  std::uint64_t seed = 0;
  int samples = 1000;
  int bound = 50;
  int max_block = 6;
  std::string formula;
  std::string assign;
  std::string to;
  std::string gadget_kind;
  bool verify = false;
};

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trimmed(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Formula input_formula(const Options& o, std::istream& in) {
  std::string text = o.formula.empty() ? slurp(in) : o.formula;
  return parse_formula(text);
}

bool mentions_order(const Formula& f) {
  if (f.kind() == Formula::Kind::Atm)
    return std::holds_alternative<OrdAtom>(f.get_atom());
  for (const auto& k : f.kids()) {
    if (mentions_order(k)) return true;
  }
  return false;
}

/** --places fixes the signature; without it the places mentioned by the
 * formula stand in (plus the real place when order atoms occur), every
 * finite one carrying M and Q. */
Signature make_sig(const Options& o, const Formula& f) {
  if (!o.places.empty()) return Signature::parse(o.places, o.m_places);
  auto ps = formula_places(f);
  if (mentions_order(f)) ps.insert(Place::real());
  std::string s0;
  for (const auto& p : ps) {
    if (!s0.empty()) s0 += ',';
    s0 += p.str();
  }
  return Signature::parse(s0, o.m_places);
}

Assignment parse_assign(const std::string& text,
                        const std::map<Var, Sort>& sorts) {
  Assignment asg;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trimmed(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw parse_error("expected name=value in --assign", {});
    std::string name = trimmed(item.substr(0, eq));
    std::string val = trimmed(item.substr(eq + 1));
    auto it = sorts.find(name);
    if (it == sorts.end())
      throw sort_error("assigned variable '" + name +
                       "' is not free in the formula");
    if (it->second == Sort::Vec) {
      asg.vec[name] = Rat::parse(val);
    } else if (val == "oo") {
      asg.val[name] = ValInt::infinity();
    } else {
      std::size_t i = val.size() && (val[0] == '-' || val[0] == '+') ? 1 : 0;
      if (i == val.size() ||
          !std::all_of(val.begin() + i, val.end(), [](unsigned char c) {
            return std::isdigit(c);
          })) {
        throw parse_error("malformed value '" + val + "' in --assign", {});
      }
      asg.val[name] = ValInt(Int(val));
    }
  }
  return asg;
}

void print_verdict(const Options& o, bool v, std::ostream& out) {
  if (o.format == "json") {
    out << nlohmann::json{{"verdict", v}}.dump() << "\n";
  } else {
    out << (v ? "true" : "false") << "\n";
  }
}

void print_formula(const Options& o, const std::string& text,
                   std::ostream& out) {
  if (o.format == "json") {
    out << nlohmann::json{{"formula", text}}.dump() << "\n";
  } else {
    out << text << "\n";
  }
}

int cmd_decide(const Options& o, std::istream& in, std::ostream& out) {
  Formula f = input_formula(o, in);
  print_verdict(o, decide(f, make_sig(o, f), o.max_block), out);
  return 0;
}

int cmd_eliminate(const Options& o, std::istream& in, std::ostream& out) {
  Formula f = input_formula(o, in);
  Signature sig = make_sig(o, f);
  validate(f, sig);
  Formula g = eliminate_all(f, sig, o.max_block);
  std::string text;
  try {
    text = to_one_sorted(g).str();
  } catch (const unsupported_error&) {
    text = g.str();
  }
  print_formula(o, text, out);
  return 0;
}

int cmd_eval(const Options& o, std::istream& in, std::ostream& out) {
  Formula f = input_formula(o, in);
  if (!f.is_qf())
    throw unsupported_error("eval takes a quantifier-free formula");
  Signature sig = make_sig(o, f);
  auto sorts = validate(f, sig, {.allow_real_m = true});
  Assignment asg = parse_assign(o.assign, sorts);
  for (const auto& [v, s] : sorts) {
    bool have = s == Sort::Vec ? asg.vec.count(v) : asg.val.count(v);
    if (!have) throw sort_error("no value assigned to '" + v + "'");
  }
  print_verdict(o, eval_qf(f, asg), out);
  return 0;
}

int cmd_witness(const Options& o, std::istream& in, std::ostream& out) {
  Formula f = input_formula(o, in);
  auto w = witness(f, make_sig(o, f), o.max_block);
  nlohmann::json jw = nlohmann::json::object();
  for (const auto& [v, r] : w) jw[v] = r.str();
  if (o.format == "json") {
    out << nlohmann::json{{"witness", jw}}.dump() << "\n";
  } else {
    out << jw.dump() << "\n";
  }
  return 0;
}

int cmd_translate(const Options& o, std::istream& in, std::ostream& out) {
  Formula f = input_formula(o, in);
  TranslationDirection dir;
  if (o.to == "two") {
    dir = TranslationDirection::OneToTwo;
  } else if (o.to == "one") {
    dir = TranslationDirection::TwoToOne;
  } else if (o.to == "order") {
    dir = TranslationDirection::LToOrder;
  } else if (o.to == "l") {
    dir = TranslationDirection::OrderToL;
  } else {
    throw unsupported_error("unknown translation target '" + o.to + "'");
  }
  print_formula(o, translate(f, dir).str(), out);
  return 0;
}

int cmd_gadget(const Options& o, std::ostream& out) {
  GadgetKind kind;
  if (o.gadget_kind == "order") {
    kind = GadgetKind::OrderFromL;
  } else if (o.gadget_kind == "nonneg") {
    kind = GadgetKind::NonNeg;
  } else if (o.gadget_kind == "mult") {
    kind = GadgetKind::MultiplicationFromM;
  } else {
    throw unsupported_error("unknown gadget '" + o.gadget_kind + "'");
  }
  Formula g = emit_gadget(kind);
  if (!o.verify) {
    print_formula(o, g.str(), out);
    return 0;
  }
  EquivReport rep = verify_gadget(kind, o.samples, o.seed);
  if (o.format == "json") {
    out << nlohmann::json{{"formula", g.str()},
                          {"verified", rep.equivalent},
                          {"samples", rep.samples}}
               .dump()
        << "\n";
  } else {
    out << g.str() << "\n";
    if (rep.equivalent) {
      out << "verified on " << rep.samples << " samples\n";
    } else {
      out << "FAILED after " << rep.samples << " samples\n";
    }
  }
  return rep.equivalent ? 0 : 1;
}

int cmd_selftest(const Options& o, std::ostream& out) {
  if (o.format == "json") {
    auto cs = acceptance::run_criteria(o.seed, o.bound);
    bool all = true;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cs) {
      all = all && c.pass;
      arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    out << nlohmann::json{{"criteria", arr}, {"pass", all}}.dump() << "\n";
    return all ? 0 : 1;
  }
  return acceptance::run_suite(o.seed, o.bound, out) ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err) {
  Options o;
  if (const char* s = std::getenv("PLACEQ_SEED")) {
    try {
      o.seed = std::stoull(s);
    } catch (...) {
    }
  }

  CLI::App app{"linear arithmetic over Q with valuation predicates", "placeq"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* c, bool takes_formula) {
    c->add_option("--places", o.places,
                  "declared places, e.g. 2,3,inf (default: those the formula "
                  "mentions)");
    c->add_option("--m-places", o.m_places,
                  "finite places carrying M and Q (default: all finite "
                  "declared places)");
    c->add_option("--format", o.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    c->add_option("--seed", o.seed, "RNG seed (default: $PLACEQ_SEED or 0)");
    c->add_option("--samples", o.samples, "sample count for verification");
    c->add_option("--bound", o.bound, "search bound for the selftest oracles");
    c->add_option("--max-block", o.max_block,
                  "largest vector quantifier block eliminated jointly");
    if (takes_formula)
      c->add_option("formula", o.formula, "input formula (default: stdin)");
  };

  add_common(app.add_subcommand("decide", "decide a sentence"), true);
  add_common(app.add_subcommand("eliminate", "print a quantifier-free "
                                             "equivalent"),
             true);
  auto* ev = app.add_subcommand("eval", "evaluate a quantifier-free formula");
  add_common(ev, true);
  ev->add_option("--assign", o.assign, "values, e.g. x=3/2,g=oo")->required();
  add_common(app.add_subcommand("witness", "extract a satisfying assignment"),
             true);
  auto* tr = app.add_subcommand("translate", "rewrite between dialects");
  add_common(tr, true);
  tr->add_option("--to", o.to, "two | one | order | l")->required();
  auto* ga = app.add_subcommand("gadget", "print a definable-relation schema");
  add_common(ga, false);
  ga->add_option("kind", o.gadget_kind, "order | nonneg | mult")->required();
  ga->add_flag("--verify", o.verify, "sample-check the schema");
  add_common(app.add_subcommand("selftest", "run the acceptance suite"), false);

  std::vector<const char*> argv;
  argv.push_back("placeq");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("decide")) return cmd_decide(o, in, out);
    if (app.got_subcommand("eliminate")) return cmd_eliminate(o, in, out);
    if (app.got_subcommand("eval")) return cmd_eval(o, in, out);
    if (app.got_subcommand("witness")) return cmd_witness(o, in, out);
    if (app.got_subcommand("translate")) return cmd_translate(o, in, out);
    if (app.got_subcommand("gadget")) return cmd_gadget(o, out);
    if (app.got_subcommand("selftest")) return cmd_selftest(o, out);
    throw internal_error("unreachable subcommand dispatch");
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const arith_error& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const unsupported_error& e) {
    err << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const sort_error& e) {
    err << "sort error: " << e.what() << "\n";
    return 4;
  } catch (const no_witness_error& e) {
    err << "no witness: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace placeq
