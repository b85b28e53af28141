#include "placeq/validate.hpp"

namespace placeq {

namespace {

struct Checker {
  const Signature& sig;
  const ValidateOptions& opts;
  std::map<Var, Sort> globals;

  void require_declared(const Place& p) {
    if (!sig.has(p)) {
      throw unsupported_error("place " + p.str() +
                              " is not among the declared places");
    }
  }

  void require_mq(const Place& p) {
    require_declared(p);
    if (!sig.has_mq(p)) {
      throw unsupported_error("place " + p.str() +
                              " does not carry M and Q (see --m-places)");
    }
  }

  void check_val_term(const ValTerm& t) {
    for (const auto& [ap, c] : t.vapp_coeffs()) require_declared(ap.place);
  }

  void check_atom(const Atom& a) {
    if (std::get_if<OrdAtom>(&a)) {
      if (!sig.has_real()) {
        throw unsupported_error(
            "order comparison needs the real place among --places");
      }
    } else if (auto* le = std::get_if<ValLeAtom>(&a)) {
      check_val_term(le->lhs);
      check_val_term(le->rhs);
    } else if (auto* eq = std::get_if<ValEqAtom>(&a)) {
      check_val_term(eq->lhs);
      check_val_term(eq->rhs);
    } else if (auto* d = std::get_if<DivAtom>(&a)) {
      check_val_term(d->t);
    } else if (auto* l = std::get_if<LAtom>(&a)) {
      require_declared(l->place);
    } else if (auto* m = std::get_if<MAtom>(&a)) {
      if (m->place.is_real()) {
        if (!opts.allow_real_m) {
          throw unsupported_error(
              "M at the real place defines multiplication; the real-place "
              "fragment is only decidable without it");
        }
        require_declared(m->place);
      } else {
        require_mq(m->place);
      }
    } else if (auto* q = std::get_if<QAtom>(&a)) {
      require_mq(q->place);
    }
  }

  void use(const Var& x, Sort s, std::map<Var, Sort>& env) {
    auto it = env.find(x);
    if (it != env.end()) {
      if (it->second != s) {
        throw sort_error("variable '" + x + "' is used at both sorts");
      }
      return;
    }
    auto [g, inserted] = globals.emplace(x, s);
    if (!inserted && g->second != s) {
      throw sort_error("variable '" + x + "' is used at both sorts");
    }
  }

  void walk(const Formula& f, std::map<Var, Sort>& env) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True:
      case K::False:
        return;
      case K::Atm: {
        check_atom(f.get_atom());
        std::set<Var> vec, val;
        atom_vars(f.get_atom(), vec, val);
        for (const auto& x : vec) use(x, Sort::Vec, env);
        for (const auto& g : val) use(g, Sort::Val, env);
        return;
      }
      case K::Exists:
      case K::Forall: {
        std::optional<Sort> prev;
        auto it = env.find(f.qvar());
        if (it != env.end()) prev = it->second;
        env[f.qvar()] = f.qsort();
        walk(f.kid(), env);
        if (prev) {
          env[f.qvar()] = *prev;
        } else {
          env.erase(f.qvar());
        }
        return;
      }
      default:
        for (const auto& k : f.kids()) walk(k, env);
        return;
    }
  }
};

}  // namespace

std::map<Var, Sort> validate(const Formula& f, const Signature& sig,
                             const ValidateOptions& opts) {
  Checker c{sig, opts, {}};
  std::map<Var, Sort> env;
  c.walk(f, env);
  return c.globals;
}

}  // namespace placeq
