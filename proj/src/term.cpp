#include "placeq/term.hpp"

#include <sstream>

namespace placeq {

VecTerm VecTerm::constant(Rat c) {
  VecTerm t;
  t.constant_ = std::move(c);
  return t;
}

VecTerm VecTerm::var(const Var& x) {
  VecTerm t;
  t.coeffs_[x] = Rat(1);
  return t;
}

VecTerm VecTerm::operator+(const VecTerm& o) const {
  VecTerm t = *this;
  t.constant_ = t.constant_ + o.constant_;
  for (const auto& [x, c] : o.coeffs_) {
    Rat s = t.coeff(x) + c;
    if (s.is_zero()) {
      t.coeffs_.erase(x);
    } else {
      t.coeffs_[x] = s;
    }
  }
  return t;
}

VecTerm VecTerm::operator-(const VecTerm& o) const { return *this + (-o); }

VecTerm VecTerm::operator-() const { return scaled(Rat(-1)); }

VecTerm VecTerm::scaled(const Rat& c) const {
  VecTerm t;
  if (c.is_zero()) return t;
  t.constant_ = constant_ * c;
  for (const auto& [x, a] : coeffs_) t.coeffs_[x] = a * c;
  return t;
}

Rat VecTerm::coeff(const Var& x) const {
  auto it = coeffs_.find(x);
  return it == coeffs_.end() ? Rat(0) : it->second;
}

std::set<Var> VecTerm::vars() const {
  std::set<Var> out;
  for (const auto& [x, c] : coeffs_) out.insert(x);
  return out;
}

VecTerm VecTerm::subst(const Var& x, const VecTerm& by) const {
  auto it = coeffs_.find(x);
  if (it == coeffs_.end()) return *this;
  Rat a = it->second;
  VecTerm rest = *this;
  rest.coeffs_.erase(x);
  return rest + by.scaled(a);
}

bool VecTerm::operator<(const VecTerm& o) const {
  if (coeffs_ != o.coeffs_) {
    return std::lexicographical_compare(coeffs_.begin(), coeffs_.end(),
                                        o.coeffs_.begin(), o.coeffs_.end());
  }
  return constant_ < o.constant_;
}

namespace {

// Shared affine printer: emits "a1*x1 + ... + c" from (name, coeff) pairs.
// Coefficients of magnitude 1 drop the "1*".
template <typename Coef>
std::string affine_str(const std::vector<std::pair<std::string, Coef>>& parts,
                       const Coef& constant, const Coef& zero, const Coef& one) {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Coef& c, const std::string& name) {
    Coef mag = c < zero ? Coef(-c) : c;
    if (first) {
      if (c < zero) os << "-";
      first = false;
    } else {
      os << (c < zero ? " - " : " + ");
    }
    if (name.empty()) {
      os << mag;
    } else {
      if (!(mag == one)) os << mag << "*";
      os << name;
    }
  };
  for (const auto& [name, c] : parts) emit(c, name);
  if (!(constant == zero) || first) emit(constant, "");
  return os.str();
}

}  // namespace

std::string VecTerm::str() const {
  std::vector<std::pair<std::string, Rat>> parts;
  for (const auto& [x, c] : coeffs_) parts.emplace_back(x, c);
  return affine_str(parts, constant_, Rat(0), Rat(1));
}

ValTerm ValTerm::constant(Int c) {
  ValTerm t;
  t.constant_ = std::move(c);
  return t;
}

ValTerm ValTerm::infinity() {
  ValTerm t;
  t.inf_ = true;
  return t;
}

ValTerm ValTerm::var(const Var& g) {
  ValTerm t;
  t.vars_[g] = 1;
  return t;
}

ValTerm ValTerm::vapp(const Place& p, const VecTerm& t) {
  if (p.is_real()) {
    throw unsupported_error("v is only defined at finite places");
  }
  if (t.is_constant()) {
    ValInt v = vp(t.constant_part(), p.prime());
    if (v.is_infinite()) return infinity();
    return constant(v.finite());
  }
  ValTerm out;
  out.vapps_[VApp{p, t}] = 1;
  return out;
}

ValTerm ValTerm::operator+(const ValTerm& o) const {
  if (inf_ || o.inf_) return infinity();
  ValTerm t = *this;
  t.constant_ += o.constant_;
  for (const auto& [g, c] : o.vars_) {
    Int s = t.vars_.count(g) ? t.vars_[g] + c : c;
    if (s == 0) {
      t.vars_.erase(g);
    } else {
      t.vars_[g] = s;
    }
  }
  for (const auto& [a, c] : o.vapps_) {
    Int s = t.vapps_.count(a) ? t.vapps_[a] + c : c;
    if (s == 0) {
      t.vapps_.erase(a);
    } else {
      t.vapps_[a] = s;
    }
  }
  return t;
}

ValTerm ValTerm::operator-(const ValTerm& o) const { return *this + (-o); }

ValTerm ValTerm::operator-() const { return scaled(Int(-1)); }

ValTerm ValTerm::scaled(const Int& c) const {
  if (c == 0) return constant(0);
  if (inf_) return infinity();
  ValTerm t;
  t.constant_ = constant_ * c;
  for (const auto& [g, a] : vars_) t.vars_[g] = a * c;
  for (const auto& [ap, a] : vapps_) t.vapps_[ap] = a * c;
  return t;
}

bool ValTerm::mentions_vec(const Var& x) const {
  if (inf_) return false;
  for (const auto& [a, c] : vapps_) {
    if (a.arg.mentions(x)) return true;
  }
  return false;
}

std::set<Var> ValTerm::vec_vars() const {
  std::set<Var> out;
  if (inf_) return out;
  for (const auto& [a, c] : vapps_) {
    auto vs = a.arg.vars();
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

std::set<Var> ValTerm::val_vars() const {
  std::set<Var> out;
  if (inf_) return out;
  for (const auto& [g, c] : vars_) out.insert(g);
  return out;
}

ValTerm ValTerm::subst_vec(const Var& x, const VecTerm& by) const {
  if (inf_) return infinity();
  ValTerm out = constant(constant_);
  for (const auto& [g, c] : vars_) out = out + var(g).scaled(c);
  for (const auto& [a, c] : vapps_) {
    out = out + vapp(a.place, a.arg.subst(x, by)).scaled(c);
  }
  return out;
}

ValTerm ValTerm::subst_val(const Var& g, const ValTerm& by) const {
  if (inf_) return infinity();
  auto it = vars_.find(g);
  if (it == vars_.end()) return *this;
  Int a = it->second;
  ValTerm rest = *this;
  rest.vars_.erase(g);
  return rest + by.scaled(a);
}

ValTerm ValTerm::subst_vapp(const VApp& ap, const ValTerm& by) const {
  if (inf_) return infinity();
  auto it = vapps_.find(ap);
  if (it == vapps_.end()) return *this;
  Int a = it->second;
  ValTerm rest = *this;
  rest.vapps_.erase(ap);
  return rest + by.scaled(a);
}

bool ValTerm::operator<(const ValTerm& o) const {
  if (inf_ != o.inf_) return o.inf_;
  if (inf_) return false;
  if (vars_ != o.vars_) {
    return std::lexicographical_compare(vars_.begin(), vars_.end(),
                                        o.vars_.begin(), o.vars_.end());
  }
  if (vapps_ != o.vapps_) {
    return std::lexicographical_compare(vapps_.begin(), vapps_.end(),
                                        o.vapps_.begin(), o.vapps_.end());
  }
  return constant_ < o.constant_;
}

std::string ValTerm::str() const {
  if (inf_) return "oo";
  std::vector<std::pair<std::string, Int>> parts;
  for (const auto& [g, c] : vars_) parts.emplace_back(g, c);
  for (const auto& [a, c] : vapps_) {
    parts.emplace_back("v[" + a.place.str() + "](" + a.arg.str() + ")", c);
  }
  return affine_str(parts, constant_, Int(0), Int(1));
}

}  // namespace placeq
