#include "placeq/padic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <variant>

#include "placeq/errors.hpp"
#include "placeq/presburger.hpp"

namespace placeq {

namespace {

Rat unit_power(const Int& p, const Int& m) {
  Int mag = m < 0 ? Int(-m) : m;
  if (mag > 4096) throw internal_error("unreasonable power of a uniformizer");
  Int pow = 1;
  for (Int i = 0; i < mag; ++i) pow *= p;
  return m < 0 ? Rat(Int(1), pow) : Rat(pow);
}

Formula lits_conj(const std::vector<Lit>& conj) {
  std::vector<Formula> fs;
  fs.reserve(conj.size());
  for (const Lit& l : conj) fs.push_back(lit_formula(l));
  return Formula::conj(std::move(fs));
}

/** Ordered partitions of elems into nonempty clusters, lowest first. */
void ordered_partitions(const std::vector<int>& elems,
                        std::vector<std::vector<int>>& cur,
                        std::vector<std::vector<std::vector<int>>>& out) {
  if (elems.empty()) {
    out.push_back(cur);
    return;
  }
  int k = static_cast<int>(elems.size());
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> first, rest;
    for (int i = 0; i < k; ++i)
      ((mask >> i) & 1u ? first : rest).push_back(elems[i]);
    cur.push_back(std::move(first));
    ordered_partitions(rest, cur, out);
    cur.pop_back();
  }
}

/** Unordered partitions: the first element anchors its block. */
void set_partitions(const std::vector<int>& elems,
                    std::vector<std::vector<int>>& cur,
                    std::vector<std::vector<std::vector<int>>>& out) {
  if (elems.empty()) {
    out.push_back(cur);
    return;
  }
  int k = static_cast<int>(elems.size()) - 1;
  std::vector<int> tail(elems.begin() + 1, elems.end());
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> block{elems[0]}, rest;
    for (int i = 0; i < k; ++i)
      ((mask >> i) & 1u ? block : rest).push_back(tail[i]);
    cur.push_back(std::move(block));
    set_partitions(rest, cur, out);
    cur.pop_back();
  }
}

Formula val_le(ValTerm a, ValTerm b) {
  return Formula::atom(ValLeAtom{std::move(a), std::move(b)});
}

Formula val_eq(ValTerm a, ValTerm b) {
  return Formula::atom(ValEqAtom{std::move(a), std::move(b)});
}

}  // namespace

CenteredSystem normalize_to_centers(const std::vector<Lit>& conj, const Var& x,
                                    const Place& p) {
  if (!p.is_finite())
    throw internal_error("sphere normalization at the real place");
  std::set<Var> taken{x};
  for (const Lit& l : conj) {
    std::set<Var> vec, val;
    atom_vars(l.atom, vec, val);
    taken.insert(vec.begin(), vec.end());
    taken.insert(val.begin(), val.end());
  }

  SphereSystem sys{p, x, {}, {}};
  std::map<VecTerm, int> index;
  auto mu_for = [&](const VecTerm& d) -> Var {
    auto it = index.find(d);
    if (it != index.end()) return sys.mu[it->second];
    Var m = fresh_var("mu", taken);
    taken.insert(m);
    index.emplace(d, static_cast<int>(sys.centers.size()));
    sys.centers.push_back(d);
    sys.mu.push_back(m);
    return m;
  };

  auto rewrite_term = [&](ValTerm t) -> ValTerm {
    for (;;) {
      std::optional<VApp> hit;
      for (const auto& entry : t.vapp_coeffs()) {
        if (!entry.first.arg.mentions(x)) continue;
        if (entry.first.place != p)
          throw internal_error("eliminated variable under a foreign place");
        hit = entry.first;
        break;
      }
      if (!hit) return t;
      Rat c = hit->arg.coeff(x);
      VecTerm center = hit->arg.subst(x, VecTerm()).scaled(Rat(-1) / c);
      Int shift = vp(c, p.prime()).finite();
      t = t.subst_vapp(*hit, ValTerm::var(mu_for(center)) +
                                 ValTerm::constant(shift));
    }
  };

  std::vector<Formula> parts;
  for (const Lit& l : conj) {
    Atom a = std::visit(
        [&](const auto& at) -> Atom {
          using T = std::decay_t<decltype(at)>;
          if constexpr (std::is_same_v<T, ValLeAtom>)
            return ValLeAtom{rewrite_term(at.lhs), rewrite_term(at.rhs)};
          else if constexpr (std::is_same_v<T, ValEqAtom>)
            return ValEqAtom{rewrite_term(at.lhs), rewrite_term(at.rhs)};
          else if constexpr (std::is_same_v<T, DivAtom>)
            return DivAtom{at.n, rewrite_term(at.t)};
          else {
            std::set<Var> vec, val;
            atom_vars(at, vec, val);
            if (vec.count(x) != 0)
              throw internal_error(
                  "eliminated variable outside a valuation argument");
            return at;
          }
        },
        l.atom);
    parts.push_back(lit_formula(Lit{l.neg, std::move(a)}));
  }
  return CenteredSystem{std::move(sys), Formula::conj(std::move(parts))};
}

std::vector<ConfigPattern> enumerate_patterns(int n) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  std::vector<std::vector<std::vector<int>>> orders;
  std::vector<std::vector<int>> cur;
  ordered_partitions(all, cur, orders);

  std::vector<ConfigPattern> out;
  for (const auto& ord : orders) {
    std::vector<std::vector<std::vector<int>>> blockings;
    cur.clear();
    set_partitions(ord.back(), cur, blockings);
    for (auto& blocks : blockings) out.push_back({ord, std::move(blocks)});
  }
  return out;
}

Formula realizability(const SphereSystem& sys, const ConfigPattern& pattern) {
  if (Int(static_cast<long long>(pattern.top_blocks.size())) >=
      sys.p.prime())
    return Formula::fls();
  auto mu = [&](int i) { return ValTerm::var(sys.mu[i]); };
  auto delta = [&](int i, int j) {
    return ValTerm::vapp(sys.p, sys.centers[i] - sys.centers[j]);
  };
  const auto& cl = pattern.clusters;
  std::vector<Formula> cs;
  for (const auto& c : cl)
    for (std::size_t t = 0; t + 1 < c.size(); ++t)
      cs.push_back(val_eq(mu(c[t]), mu(c[t + 1])));
  for (std::size_t t = 0; t + 1 < cl.size(); ++t)
    cs.push_back(val_le(mu(cl[t][0]) + ValTerm::constant(1),
                        mu(cl[t + 1][0])));
  // A strictly lower sphere fixes the distance to every higher center.
  for (std::size_t s = 0; s + 1 < cl.size(); ++s)
    for (std::size_t t = s + 1; t < cl.size(); ++t)
      for (int i : cl[s])
        for (int j : cl[t]) cs.push_back(val_eq(delta(i, j), mu(i)));
  for (std::size_t t = 0; t + 1 < cl.size(); ++t)
    for (std::size_t a = 0; a < cl[t].size(); ++a)
      for (std::size_t b = a + 1; b < cl[t].size(); ++b)
        cs.push_back(val_le(mu(cl[t][a]), delta(cl[t][a], cl[t][b])));
  // Top cluster: same class iff the centers agree one digit past the level.
  std::map<int, int> block_of;
  for (std::size_t b = 0; b < pattern.top_blocks.size(); ++b)
    for (int i : pattern.top_blocks[b]) block_of[i] = static_cast<int>(b);
  const auto& top = cl.back();
  for (std::size_t a = 0; a < top.size(); ++a)
    for (std::size_t b = a + 1; b < top.size(); ++b) {
      int i = top[a], j = top[b];
      if (block_of.at(i) == block_of.at(j))
        cs.push_back(val_le(mu(i) + ValTerm::constant(1), delta(i, j)));
      else
        cs.push_back(val_eq(delta(i, j), mu(i)));
    }
  return Formula::conj(std::move(cs));
}

Formula eliminate_vec_var_finite(const std::vector<Lit>& conj, const Var& x,
                                 const Place& p) {
  CenteredSystem cs = normalize_to_centers(conj, x, p);
  const SphereSystem& sys = cs.spheres;
  if (sys.centers.empty()) return lits_conj(conj);
  int n = static_cast<int>(sys.centers.size());
  if (n > 6) throw unsupported_error("too many sphere centers at one place");

  std::vector<Formula> parts;
  for (const VecTerm& d : sys.centers)
    parts.push_back(subst_vec(lits_conj(conj), x, d));

  std::vector<Formula> guards;
  for (const Var& m : sys.mu)
    guards.push_back(Formula::negate(
        val_eq(ValTerm::var(m), ValTerm::infinity())));

  // Per pattern all levels reduce to the top one: cluster members equal
  // their representative, and a lower representative equals its distance to
  // the top center, so a single value variable remains to eliminate.
  for (const ConfigPattern& pat : enumerate_patterns(n)) {
    Formula cond = realizability(sys, pat);
    if (cond.is_false()) continue;
    Formula body =
        Formula::conj(Formula::conj(guards), Formula::conj(cs.residual, cond));
    const auto& cl = pat.clusters;
    int top = cl.back()[0];
    for (const auto& c : cl)
      for (std::size_t t = 1; t < c.size(); ++t)
        body = subst_val(body, sys.mu[c[t]], ValTerm::var(sys.mu[c[0]]));
    for (std::size_t t = 0; t + 1 < cl.size(); ++t)
      body = subst_val(
          body, sys.mu[cl[t][0]],
          ValTerm::vapp(p, sys.centers[cl[t][0]] - sys.centers[top]));
    parts.push_back(eliminate_val_exists(body, sys.mu[top]));
  }
  return Formula::disj(std::move(parts));
}

Rat witness_finite(const SphereSystem& sys, const std::vector<ValInt>& mu,
                   const Assignment& asg) {
  if (mu.size() != sys.centers.size())
    throw internal_error("sphere level count mismatch");
  const Int& p = sys.p.prime();
  std::vector<Rat> c;
  for (const VecTerm& d : sys.centers) {
    Rat v = d.constant_part();
    for (const auto& [y, cf] : d.coeffs()) {
      auto it = asg.vec.find(y);
      if (it == asg.vec.end())
        throw internal_error("unassigned center variable " + y);
      v = v + cf * it->second;
    }
    c.push_back(v);
  }
  auto demands_met = [&](const Rat& xv) {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (vp(xv - c[i], p) != mu[i]) return false;
    return true;
  };
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i].is_infinite()) {
      if (demands_met(c[i])) return c[i];
      throw no_witness_error("exact sphere demands conflict at " +
                             sys.p.str());
    }
  std::size_t best = 0;
  for (std::size_t i = 1; i < mu.size(); ++i)
    if (mu[best] < mu[i]) best = i;
  Rat step = unit_power(p, mu[best].finite());
  for (Int r = 1; r < p; ++r) {
    Rat xv = c[best] + step * Rat(r);
    if (demands_met(xv)) return xv;
  }
  throw no_witness_error("no free residue for the demanded spheres at " +
                         sys.p.str());
}

std::optional<Rat> witness_finite_conj(const std::vector<Lit>& conj,
                                       const Var& x, const Place& p,
                                       const Assignment& asg) {
  Formula f = lits_conj(conj);
  auto sat = [&](const Rat& q) {
    Assignment a = asg;
    a.vec[x] = q;
    return eval_qf(f, a);
  };

  CenteredSystem cs = normalize_to_centers(conj, x, p);
  const Int& pr = p.prime();
  std::vector<Rat> centers;
  for (const VecTerm& d : cs.spheres.centers) {
    Rat v = d.constant_part();
    for (const auto& [y, cf] : d.coeffs()) {
      auto it = asg.vec.find(y);
      if (it == asg.vec.end())
        throw internal_error("unassigned center variable " + y);
      v = v + cf * it->second;
    }
    centers.push_back(v);
  }
  if (centers.empty()) centers.push_back(Rat(0));
  for (const Rat& q : centers)
    if (sat(q)) return q;

  // Exponent window: the constants of the system, stretched by the lcm of
  // the divisibility moduli (a residue demand can push the least solution a
  // full period further) and by the spread of the center distances.
  Int cmax = 0, moduli = 1, span = 0;
  auto widen = [&](const ValTerm& s) {
    if (s.is_infinite()) return;
    Int k = s.constant_part();
    if (k < 0) k = -k;
    cmax = std::max(cmax, k);
  };
  for (const Lit& l : conj) {
    if (const auto* a = std::get_if<ValLeAtom>(&l.atom)) {
      widen(a->lhs);
      widen(a->rhs);
    } else if (const auto* e = std::get_if<ValEqAtom>(&l.atom)) {
      widen(e->lhs);
      widen(e->rhs);
    } else if (const auto* dv = std::get_if<DivAtom>(&l.atom)) {
      widen(dv->t);
      if (moduli <= 60) moduli = boost::multiprecision::lcm(moduli, dv->n);
    }
  }
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      ValInt d = vp(centers[i] - centers[j], pr);
      if (!d.is_infinite()) {
        Int k = d.finite() < 0 ? Int(-d.finite()) : d.finite();
        span = std::max(span, k);
      }
    }
  Int w = cmax + std::min(moduli, Int(60)) + span + 3;
  if (w > 80) w = 80;

  for (int digits = 1; digits <= 2; ++digits) {
    Int umax = digits == 1 ? pr : pr * pr;
    for (Int m = -w; m <= w; ++m) {
      Rat step = unit_power(pr, m);
      for (Int u = 1; u < umax; ++u) {
        if (u % pr == 0) continue;
        for (const Rat& c : centers) {
          Rat q = c + step * Rat(u);
          if (sat(q)) return q;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace placeq
