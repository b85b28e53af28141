#include "placeq/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace placeq {

Formula plug(const Formula& f, const Assignment& asg) {
  Formula g = f;
  for (const auto& [x, r] : asg.vec) {
    g = subst_vec(g, x, VecTerm::constant(r));
  }
  for (const auto& [x, v] : asg.val) {
    g = subst_val(
        g, x, v.is_infinite() ? ValTerm::infinity() : ValTerm::constant(v.finite()));
  }
  return g;
}

bool eval_qf(const Formula& f, const Assignment& asg) {
  if (!f.is_qf()) throw internal_error("eval on a quantified formula");
  Formula g = plug(f, asg);
  if (g.is_true()) return true;
  if (g.is_false()) return false;
  std::set<Var> vec, val;
  free_vars(g, vec, val);
  std::string missing;
  for (const auto& x : vec) missing += " " + x;
  for (const auto& x : val) missing += " " + x;
  throw internal_error("eval: unassigned variables:" + missing);
}

namespace {

struct SpecialCollector {
  std::set<Rat, RatLess> consts;
  std::set<Int> val_consts;
  std::set<Place> places;

  void vec_term(const VecTerm& t) {
    consts.insert(t.constant_part());
    if (t.coeffs().size() == 1) {
      const auto& [x, a] = *t.coeffs().begin();
      consts.insert(-(t.constant_part() / a));
    }
  }

  void val_term(const ValTerm& t) {
    if (t.is_infinite()) return;
    val_consts.insert(t.constant_part());
    for (const auto& [ap, c] : t.vapp_coeffs()) {
      places.insert(ap.place);
      vec_term(ap.arg);
    }
  }

  void atom(const Atom& a) {
    if (auto* e = std::get_if<VecEqAtom>(&a)) {
      vec_term(e->t);
    } else if (auto* o = std::get_if<OrdAtom>(&a)) {
      vec_term(o->t);
    } else if (auto* le = std::get_if<ValLeAtom>(&a)) {
      val_term(le->lhs);
      val_term(le->rhs);
    } else if (auto* eq = std::get_if<ValEqAtom>(&a)) {
      val_term(eq->lhs);
      val_term(eq->rhs);
    } else if (auto* d = std::get_if<DivAtom>(&a)) {
      val_term(d->t);
      val_consts.insert(d->n);
    } else if (auto* l = std::get_if<LAtom>(&a)) {
      places.insert(l->place);
      vec_term(l->x);
      vec_term(l->y);
    } else if (auto* m = std::get_if<MAtom>(&a)) {
      places.insert(m->place);
      vec_term(m->x);
      vec_term(m->y);
      vec_term(m->z);
    } else if (auto* q = std::get_if<QAtom>(&a)) {
      places.insert(q->place);
      vec_term(q->t);
    }
  }

  void walk(const Formula& f) {
    if (f.kind() == Formula::Kind::Atm) {
      atom(f.get_atom());
      return;
    }
    for (const auto& k : f.kids()) walk(k);
  }
};

Rat pow_rat(const Int& p, int k) {
  Int num = 1;
  for (int i = 0; i < (k < 0 ? -k : k); ++i) num *= p;
  return k >= 0 ? Rat(num) : Rat(Int(1), num);
}

}  // namespace

Sampler::Sampler(const Formula& f, std::uint64_t seed) : state_(seed) {
  SpecialCollector col;
  col.walk(f);
  std::set<Rat, RatLess> pool;
  for (int a = -4; a <= 4; ++a) {
    for (int b = 1; b <= 4; ++b) pool.insert(Rat(Int(a), Int(b)));
  }
  for (const auto& c : col.consts) pool.insert(c);
  std::set<Rat, RatLess> base = pool;
  base.insert(Rat(0));
  for (const auto& c : base) {
    if (pool.size() > 400) break;
    for (const auto& p : col.places) {
      if (p.is_real()) continue;
      for (int k = -2; k <= 2; ++k) {
        Rat step = pow_rat(p.prime(), k);
        pool.insert(c + step);
        pool.insert(c - step);
        pool.insert(c + step + step);
      }
    }
  }
  specials_.assign(pool.begin(), pool.end());
  std::set<Int> vpool;
  for (int k = -6; k <= 6; ++k) vpool.insert(Int(k));
  for (const auto& c : col.val_consts) {
    vpool.insert(c);
    vpool.insert(c + 1);
    vpool.insert(c - 1);
    vpool.insert(c + 2);
  }
  val_specials_.assign(vpool.begin(), vpool.end());
}

std::uint64_t Sampler::rnd() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Rat Sampler::next_rat() {
  if (rnd() % 4 != 3 && !specials_.empty()) {
    return specials_[rnd() % specials_.size()];
  }
  long long num = static_cast<long long>(rnd() % 25) - 12;
  long long den = static_cast<long long>(rnd() % 12) + 1;
  return Rat(Int(num), Int(den));
}

ValInt Sampler::next_val() {
  if (rnd() % 8 == 0) return ValInt::infinity();
  if (!val_specials_.empty() && rnd() % 4 != 3) {
    return ValInt(val_specials_[rnd() % val_specials_.size()]);
  }
  return ValInt(Int(static_cast<long long>(rnd() % 13) - 6));
}

Assignment Sampler::next_assignment(const std::map<Var, Sort>& vars) {
  Assignment asg;
  for (const auto& [x, s] : vars) {
    if (s == Sort::Vec) {
      asg.vec[x] = next_rat();
    } else {
      asg.val[x] = next_val();
    }
  }
  return asg;
}

namespace {

std::map<Var, Sort> merged_free_vars(const Formula& f, const Formula& g) {
  std::map<Var, Sort> vars;
  for (const Formula* h : {&f, &g}) {
    std::set<Var> vec, val;
    free_vars(*h, vec, val);
    for (const auto& x : vec) {
      auto [it, ins] = vars.emplace(x, Sort::Vec);
      if (!ins && it->second != Sort::Vec) {
        throw sort_error("variable '" + x + "' is used at both sorts");
      }
    }
    for (const auto& x : val) {
      auto [it, ins] = vars.emplace(x, Sort::Val);
      if (!ins && it->second != Sort::Val) {
        throw sort_error("variable '" + x + "' is used at both sorts");
      }
    }
  }
  return vars;
}

}  // namespace

EquivReport check_equiv_sampled(const Formula& f, const Formula& g,
                                int samples, std::uint64_t seed) {
  EquivReport rep;
  auto vars = merged_free_vars(f, g);
  Sampler sampler(Formula::conj(f, g), seed);
  for (int i = 0; i < samples; ++i) {
    Assignment asg = sampler.next_assignment(vars);
    ++rep.samples;
    if (eval_qf(f, asg) != eval_qf(g, asg)) {
      rep.equivalent = false;
      rep.counterexample = std::move(asg);
      return rep;
    }
  }
  return rep;
}

std::optional<Assignment> search_witness(const Formula& f, int bound,
                                         std::uint64_t seed, int cap) {
  std::map<Var, Sort> vars = merged_free_vars(f, f);
  if (vars.empty()) {
    Assignment empty;
    if (eval_qf(f, empty)) return empty;
    return std::nullopt;
  }
  Sampler sampler(f, seed);

  // Per-variable candidate lists: specials, then fractions by height.
  std::vector<Var> names;
  std::vector<Sort> sorts;
  std::vector<std::vector<Rat>> rat_cands;
  std::vector<std::vector<ValInt>> val_cands;
  for (const auto& [x, s] : vars) {
    names.push_back(x);
    sorts.push_back(s);
  }
  std::size_t per_var_cap = 2000;
  {
    Sampler probe(f, seed);
    std::vector<Rat> rats;
    std::set<Rat, RatLess> seen;
    for (const Rat& r : probe.specials()) {
      if (seen.insert(r).second) rats.push_back(r);
    }
    for (int h = 1; h <= 2 * bound && rats.size() < per_var_cap; ++h) {
      for (int den = 1; den <= bound && den < h; ++den) {
        int num = h - den;
        if (num > bound) continue;
        for (int s = 1; s >= -1; s -= 2) {
          Rat r(Int(s * num), Int(den));
          if (seen.insert(r).second) rats.push_back(r);
        }
      }
    }
    std::vector<ValInt> vals;
    vals.push_back(ValInt::infinity());
    for (const Int& c : probe.val_specials()) vals.push_back(ValInt(c));
    for (std::size_t i = 0; i < names.size(); ++i) {
      rat_cands.push_back(rats);
      val_cands.push_back(vals);
    }
  }

  // Odometer over capped prefixes of the candidate lists.
  std::size_t k = names.size();
  std::size_t per = std::max<std::size_t>(
      4, static_cast<std::size_t>(std::pow(static_cast<double>(cap),
                                           1.0 / static_cast<double>(k))));
  std::vector<std::size_t> limit(k), idx(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t n = sorts[i] == Sort::Vec ? rat_cands[i].size()
                                          : val_cands[i].size();
    limit[i] = std::min(per, n);
    if (limit[i] == 0) return std::nullopt;
  }
  while (true) {
    Assignment asg;
    for (std::size_t i = 0; i < k; ++i) {
      if (sorts[i] == Sort::Vec) {
        asg.vec[names[i]] = rat_cands[i][idx[i]];
      } else {
        asg.val[names[i]] = val_cands[i][idx[i]];
      }
    }
    if (eval_qf(f, asg)) return asg;
    std::size_t i = 0;
    for (; i < k; ++i) {
      if (++idx[i] < limit[i]) break;
      idx[i] = 0;
    }
    if (i == k) break;
  }

  // Random phase with the remaining budget.
  for (int i = 0; i < cap / 4; ++i) {
    Assignment asg = sampler.next_assignment(vars);
    if (eval_qf(f, asg)) return asg;
  }
  return std::nullopt;
}

}  // namespace placeq
