#include "placeq/parser.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace placeq {

namespace {

enum class Tok {
  Ident,
  Nat,
  KwE,
  KwA,
  KwVec,
  KwVal,
  KwInf,
  KwOO,
  KwV,
  KwL,
  KwM,
  KwQ,
  KwP,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Comma,
  Colon,
  Dot,
  Amp,
  Pipe,
  Bang,
  Arrow,
  Le,
  Lt,
  Eq,
  Plus,
  Minus,
  Star,
  Slash,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Int nat;
  SourceSpan span;
};

SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  s.end = b.end;
  return s;
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  auto span_here = [&](std::size_t len) {
    return SourceSpan{i, i + len, line, col};
  };
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(text.substr(i, len)), Int(0), span_here(len)});
    advance(len);
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        ++j;
      }
      Token t{Tok::Nat, std::string(text.substr(i, j - i)), Int(0),
              span_here(j - i)};
      t.nat = Int(t.text);
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_')) {
        ++j;
      }
      std::string w(text.substr(i, j - i));
      Tok k = Tok::Ident;
      if (w == "E") k = Tok::KwE;
      else if (w == "A") k = Tok::KwA;
      else if (w == "vec") k = Tok::KwVec;
      else if (w == "val") k = Tok::KwVal;
      else if (w == "inf") k = Tok::KwInf;
      else if (w == "oo") k = Tok::KwOO;
      else if (w == "v") k = Tok::KwV;
      else if (w == "L") k = Tok::KwL;
      else if (w == "M") k = Tok::KwM;
      else if (w == "Q") k = Tok::KwQ;
      else if (w == "P") k = Tok::KwP;
      out.push_back({k, std::move(w), Int(0), span_here(j - i)});
      advance(j - i);
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '[': push(Tok::LBrack, 1); continue;
      case ']': push(Tok::RBrack, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '.': push(Tok::Dot, 1); continue;
      case '&': push(Tok::Amp, 1); continue;
      case '|': push(Tok::Pipe, 1); continue;
      case '!': push(Tok::Bang, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      case '/': push(Tok::Slash, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          push(Tok::Arrow, 2);
        } else {
          push(Tok::Minus, 1);
        }
        continue;
      case '<':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          push(Tok::Le, 2);
        } else {
          push(Tok::Lt, 1);
        }
        continue;
      default:
        throw parse_error("unexpected character '" + std::string(1, c) + "'",
                          span_here(1));
    }
  }
  out.push_back({Tok::End, "", Int(0), SourceSpan{i, i, line, col}});
  return out;
}

// Raw parse tree: sorts are resolved in a later pass.

struct RawTerm;

struct RawFactor {
  enum class K { Ident, VApp, OO };
  K k = K::Ident;
  std::string name;
  Place place = Place::real();
  std::shared_ptr<RawTerm> arg;
  SourceSpan span;
};

struct RawTerm {
  struct Addend {
    Rat coeff;
    std::optional<RawFactor> factor;
    SourceSpan span;
  };
  std::vector<Addend> addends;
  SourceSpan span;
};

enum class Rel { Le, Lt, Eq };

struct RawAtom {
  enum class K { Cmp, L, M, Q, P };
  K k = K::Cmp;
  Rel rel = Rel::Eq;
  std::vector<RawTerm> args;
  Place place = Place::real();
  Int n;
  SourceSpan span;
  int cmp_id = -1;
};

struct RawFormula {
  enum class K { Atom, Not, And, Or, Implies, Exists, Forall };
  K k = K::Atom;
  std::optional<RawAtom> atom;
  std::vector<std::shared_ptr<RawFormula>> kids;
  std::string var;
  Sort sort = Sort::Vec;
  SourceSpan span;
};

using RawPtr = std::shared_ptr<RawFormula>;

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  RawPtr parse() {
    RawPtr f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      take();
      return true;
    }
    return false;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) {
      throw parse_error("expected " + what, peek().span);
    }
    return take();
  }

  RawPtr formula() {
    if (peek().kind == Tok::KwE || peek().kind == Tok::KwA) {
      bool ex = take().kind == Tok::KwE;
      const Token& name = expect(Tok::Ident, "variable name");
      expect(Tok::Colon, "':'");
      Sort s;
      if (accept(Tok::KwVec)) {
        s = Sort::Vec;
      } else if (accept(Tok::KwVal)) {
        s = Sort::Val;
      } else {
        throw parse_error("expected 'vec' or 'val'", peek().span);
      }
      expect(Tok::Dot, "'.'");
      RawPtr body = formula();
      auto f = std::make_shared<RawFormula>();
      f->k = ex ? RawFormula::K::Exists : RawFormula::K::Forall;
      f->var = name.text;
      f->sort = s;
      f->kids.push_back(body);
      f->span = join(name.span, body->span);
      return f;
    }
    return impl();
  }

  RawPtr impl() {
    RawPtr lhs = disj();
    if (accept(Tok::Arrow)) {
      RawPtr rhs = impl();
      auto f = std::make_shared<RawFormula>();
      f->k = RawFormula::K::Implies;
      f->kids = {lhs, rhs};
      f->span = join(lhs->span, rhs->span);
      return f;
    }
    return lhs;
  }

  RawPtr disj() {
    RawPtr first = conj();
    if (peek().kind != Tok::Pipe) return first;
    auto f = std::make_shared<RawFormula>();
    f->k = RawFormula::K::Or;
    f->kids.push_back(first);
    while (accept(Tok::Pipe)) f->kids.push_back(conj());
    f->span = join(first->span, f->kids.back()->span);
    return f;
  }

  RawPtr conj() {
    RawPtr first = lit();
    if (peek().kind != Tok::Amp) return first;
    auto f = std::make_shared<RawFormula>();
    f->k = RawFormula::K::And;
    f->kids.push_back(first);
    while (accept(Tok::Amp)) f->kids.push_back(lit());
    f->span = join(first->span, f->kids.back()->span);
    return f;
  }

  RawPtr lit() {
    if (peek().kind == Tok::Bang) {
      const Token& bang = take();
      RawPtr inner = lit_body();
      auto f = std::make_shared<RawFormula>();
      f->k = RawFormula::K::Not;
      f->kids.push_back(inner);
      f->span = join(bang.span, inner->span);
      return f;
    }
    return lit_body();
  }

  RawPtr lit_body() {
    if (accept(Tok::LParen)) {
      RawPtr f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    RawAtom a = atom();
    auto f = std::make_shared<RawFormula>();
    f->k = RawFormula::K::Atom;
    f->span = a.span;
    f->atom = std::move(a);
    return f;
  }

  Place place_name() {
    if (accept(Tok::KwInf)) return Place::real();
    const Token& t = expect(Tok::Nat, "place (a prime or 'inf')");
    return Place::finite(t.nat);
  }

  Int positive_nat(const char* what) {
    const Token& t = expect(Tok::Nat, what);
    if (t.nat < 1) throw parse_error("modulus must be positive", t.span);
    return t.nat;
  }

  RawAtom atom() {
    RawAtom a;
    const Token& start = peek();
    switch (start.kind) {
      case Tok::KwL:
      case Tok::KwM: {
        bool is_l = take().kind == Tok::KwL;
        a.k = is_l ? RawAtom::K::L : RawAtom::K::M;
        expect(Tok::LBrack, "'['");
        a.place = place_name();
        expect(Tok::RBrack, "']'");
        expect(Tok::LParen, "'('");
        a.args.push_back(term());
        expect(Tok::Comma, "','");
        a.args.push_back(term());
        if (!is_l) {
          expect(Tok::Comma, "','");
          a.args.push_back(term());
        }
        const Token& close = expect(Tok::RParen, "')'");
        a.span = join(start.span, close.span);
        return a;
      }
      case Tok::KwQ: {
        take();
        a.k = RawAtom::K::Q;
        expect(Tok::LBrack, "'['");
        a.place = place_name();
        if (a.place.is_real()) {
          throw parse_error("Q is only defined at finite places", start.span);
        }
        expect(Tok::Comma, "','");
        a.n = positive_nat("modulus");
        expect(Tok::RBrack, "']'");
        expect(Tok::LParen, "'('");
        a.args.push_back(term());
        const Token& close = expect(Tok::RParen, "')'");
        a.span = join(start.span, close.span);
        return a;
      }
      case Tok::KwP: {
        take();
        a.k = RawAtom::K::P;
        expect(Tok::LBrack, "'['");
        a.n = positive_nat("modulus");
        expect(Tok::RBrack, "']'");
        expect(Tok::LParen, "'('");
        a.args.push_back(term());
        const Token& close = expect(Tok::RParen, "')'");
        a.span = join(start.span, close.span);
        return a;
      }
      default: {
        a.k = RawAtom::K::Cmp;
        a.args.push_back(term());
        switch (peek().kind) {
          case Tok::Le:
            a.rel = Rel::Le;
            break;
          case Tok::Lt:
            a.rel = Rel::Lt;
            break;
          case Tok::Eq:
            a.rel = Rel::Eq;
            break;
          default:
            throw parse_error("expected '<=', '<' or '='", peek().span);
        }
        take();
        a.args.push_back(term());
        a.span = join(a.args[0].span, a.args[1].span);
        return a;
      }
    }
  }

  Rat rat_lit() {
    const Token& n = expect(Tok::Nat, "number");
    if (accept(Tok::Slash)) {
      const Token& d = expect(Tok::Nat, "denominator");
      if (d.nat == 0) throw parse_error("zero denominator", d.span);
      return Rat(n.nat, d.nat);
    }
    return Rat(n.nat);
  }

  RawTerm term() {
    RawTerm t;
    const Token& start = peek();
    bool neg = accept(Tok::Minus);
    t.addends.push_back(addend(neg));
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = take().kind == Tok::Minus;
      t.addends.push_back(addend(minus));
    }
    t.span = join(start.span, t.addends.back().span);
    return t;
  }

  RawTerm::Addend addend(bool neg) {
    RawTerm::Addend ad;
    const Token& start = peek();
    if (start.kind == Tok::Nat) {
      Rat c = rat_lit();
      ad.coeff = neg ? -c : c;
      if (accept(Tok::Star)) {
        ad.factor = factor();
        ad.span = join(start.span, ad.factor->span);
      } else {
        ad.span = start.span;
      }
      return ad;
    }
    ad.coeff = neg ? Rat(-1) : Rat(1);
    ad.factor = factor();
    ad.span = ad.factor->span;
    return ad;
  }

  RawFactor factor() {
    RawFactor f;
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        take();
        f.k = RawFactor::K::Ident;
        f.name = t.text;
        f.span = t.span;
        return f;
      case Tok::KwV: {
        take();
        f.k = RawFactor::K::VApp;
        expect(Tok::LBrack, "'['");
        f.place = place_name();
        expect(Tok::RBrack, "']'");
        expect(Tok::LParen, "'('");
        f.arg = std::make_shared<RawTerm>(term());
        const Token& close = expect(Tok::RParen, "')'");
        f.span = join(t.span, close.span);
        return f;
      }
      case Tok::KwOO:
        take();
        f.k = RawFactor::K::OO;
        f.span = t.span;
        return f;
      case Tok::KwE:
      case Tok::KwA:
      case Tok::KwVec:
      case Tok::KwVal:
      case Tok::KwInf:
      case Tok::KwL:
      case Tok::KwM:
      case Tok::KwQ:
      case Tok::KwP:
        throw parse_error("'" + t.text + "' is a reserved name", t.span);
      default:
        throw parse_error("expected a term", t.span);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Sort resolution. Bound variables carry their declared sort; free variables
// get one global slot each. Predicate argument positions force sorts, then
// comparisons are resolved to a fixpoint, then leftovers default to vec.

struct CmpOcc {
  std::optional<Sort> bound;
  std::string global;
  SourceSpan span;
};

struct CmpRecord {
  std::vector<CmpOcc> occs;
  bool forced_vec = false;
  bool forced_val = false;
  std::optional<Sort> verdict;
  SourceSpan span;
};

class SortResolver {
 public:
  void analyze(RawFormula& f) {
    std::map<std::string, Sort> env;
    walk(f, env);
    resolve();
  }

  Sort sort_of(const std::string& name,
               const std::map<std::string, Sort>& env) const {
    auto it = env.find(name);
    if (it != env.end()) return it->second;
    auto g = globals_.find(name);
    if (g == globals_.end()) {
      throw internal_error("unresolved variable sort: " + name);
    }
    return g->second;
  }

  Sort verdict(int cmp_id) const { return *cmps_[cmp_id].verdict; }

  const std::map<std::string, Sort>& globals() const { return globals_; }

 private:
  void assign_global(const std::string& name, Sort s, const SourceSpan& span) {
    auto [it, inserted] = globals_.emplace(name, s);
    if (!inserted && it->second != s) {
      throw sort_error("variable '" + name +
                       "' is used at both sorts (line " +
                       std::to_string(span.line) + ")");
    }
  }

  void force(const std::string& name, Sort s,
             const std::map<std::string, Sort>& env, const SourceSpan& span) {
    auto it = env.find(name);
    if (it != env.end()) {
      if (it->second != s) {
        throw sort_error("variable '" + name + "' has sort " +
                         (it->second == Sort::Vec ? "vec" : "val") +
                         " but is used at sort " +
                         (s == Sort::Vec ? "vec" : "val") + " (line " +
                         std::to_string(span.line) + ")");
      }
      return;
    }
    assign_global(name, s, span);
  }

  void force_vec_term(const RawTerm& t,
                      const std::map<std::string, Sort>& env) {
    for (const auto& ad : t.addends) {
      if (!ad.factor) continue;
      switch (ad.factor->k) {
        case RawFactor::K::Ident:
          force(ad.factor->name, Sort::Vec, env, ad.factor->span);
          break;
        default:
          throw parse_error("vector term expected", ad.factor->span);
      }
    }
  }

  void scan_val_term(const RawTerm& t, const std::map<std::string, Sort>& env,
                     bool forced) {
    // Inside P[n](...): top-level idents are value-sorted, v-arguments are
    // vector terms.
    for (const auto& ad : t.addends) {
      if (!ad.factor) continue;
      switch (ad.factor->k) {
        case RawFactor::K::Ident:
          if (forced) force(ad.factor->name, Sort::Val, env, ad.factor->span);
          break;
        case RawFactor::K::VApp:
          force_vec_term(*ad.factor->arg, env);
          break;
        case RawFactor::K::OO:
          break;
      }
    }
  }

  void scan_cmp(RawAtom& a, const std::map<std::string, Sort>& env) {
    CmpRecord rec;
    rec.span = a.span;
    for (const auto& arg : a.args) {
      for (const auto& ad : arg.addends) {
        if (!ad.coeff.is_integer()) rec.forced_vec = true;
        if (!ad.factor) continue;
        switch (ad.factor->k) {
          case RawFactor::K::Ident: {
            CmpOcc occ;
            auto it = env.find(ad.factor->name);
            if (it != env.end()) {
              occ.bound = it->second;
            } else {
              occ.global = ad.factor->name;
            }
            occ.span = ad.factor->span;
            rec.occs.push_back(std::move(occ));
            break;
          }
          case RawFactor::K::VApp:
            rec.forced_val = true;
            force_vec_term(*ad.factor->arg, env);
            break;
          case RawFactor::K::OO:
            rec.forced_val = true;
            break;
        }
      }
    }
    if (rec.forced_vec && rec.forced_val) {
      throw sort_error("comparison mixes vector and value sorts (line " +
                       std::to_string(a.span.line) + ")");
    }
    a.cmp_id = static_cast<int>(cmps_.size());
    cmps_.push_back(std::move(rec));
  }

  void walk(RawFormula& f, std::map<std::string, Sort>& env) {
    switch (f.k) {
      case RawFormula::K::Atom: {
        RawAtom& a = *f.atom;
        switch (a.k) {
          case RawAtom::K::L:
          case RawAtom::K::M:
          case RawAtom::K::Q:
            for (const auto& arg : a.args) force_vec_term(arg, env);
            break;
          case RawAtom::K::P:
            scan_val_term(a.args[0], env, true);
            break;
          case RawAtom::K::Cmp:
            scan_cmp(a, env);
            break;
        }
        return;
      }
      case RawFormula::K::Exists:
      case RawFormula::K::Forall: {
        std::optional<Sort> prev;
        auto it = env.find(f.var);
        if (it != env.end()) prev = it->second;
        env[f.var] = f.sort;
        walk(*f.kids[0], env);
        if (prev) {
          env[f.var] = *prev;
        } else {
          env.erase(f.var);
        }
        return;
      }
      default:
        for (auto& k : f.kids) walk(*k, env);
        return;
    }
  }

  void resolve() {
    for (auto& rec : cmps_) {
      if (rec.forced_val) settle(rec, Sort::Val);
      if (rec.forced_vec) settle(rec, Sort::Vec);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto& rec : cmps_) {
        if (rec.verdict) continue;
        std::optional<Sort> known;
        for (const auto& occ : rec.occs) {
          std::optional<Sort> s = occ.bound;
          if (!s) {
            auto g = globals_.find(occ.global);
            if (g != globals_.end()) s = g->second;
          }
          if (!s) continue;
          if (known && *known != *s) {
            throw sort_error("comparison mixes vector and value sorts (line " +
                             std::to_string(rec.span.line) + ")");
          }
          known = s;
        }
        if (known) {
          settle(rec, *known);
          changed = true;
        }
      }
    }
    for (auto& rec : cmps_) {
      if (!rec.verdict) settle(rec, Sort::Vec);
    }
  }

  void settle(CmpRecord& rec, Sort s) {
    rec.verdict = s;
    for (const auto& occ : rec.occs) {
      if (occ.bound) {
        if (*occ.bound != s) {
          throw sort_error("comparison mixes vector and value sorts (line " +
                           std::to_string(occ.span.line) + ")");
        }
      } else {
        assign_global(occ.global, s, occ.span);
      }
    }
  }

  std::map<std::string, Sort> globals_;
  std::vector<CmpRecord> cmps_;
};

class Builder {
 public:
  explicit Builder(const SortResolver& sorts) : sorts_(sorts) {}

  Formula build(const RawFormula& f) {
    std::map<std::string, Sort> env;
    return walk(f, env);
  }

 private:
  VecTerm to_vec(const RawTerm& t, const std::map<std::string, Sort>& env) {
    VecTerm out;
    for (const auto& ad : t.addends) {
      if (!ad.factor) {
        out = out + VecTerm::constant(ad.coeff);
        continue;
      }
      if (ad.factor->k != RawFactor::K::Ident) {
        throw parse_error("vector term expected", ad.factor->span);
      }
      if (sorts_.sort_of(ad.factor->name, env) != Sort::Vec) {
        throw sort_error("variable '" + ad.factor->name +
                         "' is used at both sorts (line " +
                         std::to_string(ad.factor->span.line) + ")");
      }
      out = out + VecTerm::var(ad.factor->name).scaled(ad.coeff);
    }
    return out;
  }

  ValTerm to_val(const RawTerm& t, const std::map<std::string, Sort>& env) {
    ValTerm out;
    for (const auto& ad : t.addends) {
      if (!ad.coeff.is_integer()) {
        throw sort_error("value-sort coefficients must be integers (line " +
                         std::to_string(ad.span.line) + ")");
      }
      const Int& c = ad.coeff.num();
      if (!ad.factor) {
        out = out + ValTerm::constant(c);
        continue;
      }
      switch (ad.factor->k) {
        case RawFactor::K::Ident:
          if (sorts_.sort_of(ad.factor->name, env) != Sort::Val) {
            throw sort_error("variable '" + ad.factor->name +
                             "' is used at both sorts (line " +
                             std::to_string(ad.factor->span.line) + ")");
          }
          out = out + ValTerm::var(ad.factor->name).scaled(c);
          break;
        case RawFactor::K::VApp:
          out = out +
                ValTerm::vapp(ad.factor->place, to_vec(*ad.factor->arg, env))
                    .scaled(c);
          break;
        case RawFactor::K::OO:
          if (c != 0) out = out + ValTerm::infinity();
          break;
      }
    }
    return out;
  }

  Formula build_atom(const RawAtom& a, const std::map<std::string, Sort>& env) {
    switch (a.k) {
      case RawAtom::K::L:
        return Formula::atom(
            LAtom{a.place, to_vec(a.args[0], env), to_vec(a.args[1], env)});
      case RawAtom::K::M:
        return Formula::atom(MAtom{a.place, to_vec(a.args[0], env),
                                   to_vec(a.args[1], env),
                                   to_vec(a.args[2], env)});
      case RawAtom::K::Q:
        return Formula::atom(QAtom{a.place, a.n, to_vec(a.args[0], env)});
      case RawAtom::K::P:
        return Formula::atom(DivAtom{a.n, to_val(a.args[0], env)});
      case RawAtom::K::Cmp: {
        if (sorts_.verdict(a.cmp_id) == Sort::Vec) {
          VecTerm lhs = to_vec(a.args[0], env);
          VecTerm rhs = to_vec(a.args[1], env);
          switch (a.rel) {
            case Rel::Le:
              return Formula::atom(OrdAtom{rhs - lhs, false});
            case Rel::Lt:
              return Formula::atom(OrdAtom{rhs - lhs, true});
            case Rel::Eq:
              return Formula::atom(VecEqAtom{lhs - rhs});
          }
        }
        ValTerm lhs = to_val(a.args[0], env);
        ValTerm rhs = to_val(a.args[1], env);
        switch (a.rel) {
          case Rel::Le:
            return Formula::atom(ValLeAtom{lhs, rhs});
          case Rel::Lt:
            // Strict order with the correct treatment of oo: s < t is
            // the negation of t <= s.
            return Formula::negate(Formula::atom(ValLeAtom{rhs, lhs}));
          case Rel::Eq:
            return Formula::atom(ValEqAtom{lhs, rhs});
        }
        throw internal_error("unreachable");
      }
    }
    throw internal_error("unreachable");
  }

  Formula walk(const RawFormula& f, std::map<std::string, Sort>& env) {
    switch (f.k) {
      case RawFormula::K::Atom:
        return build_atom(*f.atom, env);
      case RawFormula::K::Not:
        return Formula::negate(walk(*f.kids[0], env));
      case RawFormula::K::And: {
        std::vector<Formula> kids;
        for (const auto& k : f.kids) kids.push_back(walk(*k, env));
        return Formula::conj(std::move(kids));
      }
      case RawFormula::K::Or: {
        std::vector<Formula> kids;
        for (const auto& k : f.kids) kids.push_back(walk(*k, env));
        return Formula::disj(std::move(kids));
      }
      case RawFormula::K::Implies: {
        Formula lhs = walk(*f.kids[0], env);
        Formula rhs = walk(*f.kids[1], env);
        return Formula::implies(std::move(lhs), std::move(rhs));
      }
      case RawFormula::K::Exists:
      case RawFormula::K::Forall: {
        std::optional<Sort> prev;
        auto it = env.find(f.var);
        if (it != env.end()) prev = it->second;
        env[f.var] = f.sort;
        Formula body = walk(*f.kids[0], env);
        if (prev) {
          env[f.var] = *prev;
        } else {
          env.erase(f.var);
        }
        return f.k == RawFormula::K::Exists
                   ? Formula::exists(f.var, f.sort, std::move(body))
                   : Formula::forall(f.var, f.sort, std::move(body));
      }
    }
    throw internal_error("unreachable");
  }

  const SortResolver& sorts_;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser parser(lex(text));
  RawPtr raw = parser.parse();
  SortResolver sorts;
  sorts.analyze(*raw);
  Builder builder(sorts);
  return builder.build(*raw);
}

}  // namespace placeq
