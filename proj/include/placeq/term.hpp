#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "placeq/place.hpp"
#include "placeq/rat.hpp"

namespace placeq {

using Var = std::string;

enum class Sort { Vec, Val };

/** Affine Q-linear combination of vector variables: sum of c_i * x_i + c0.
 * Zero coefficients are never stored, so equality is structural. */
class VecTerm {
 public:
  VecTerm() = default;
  static VecTerm constant(Rat c);
  static VecTerm var(const Var& x);

  VecTerm operator+(const VecTerm& o) const;
  VecTerm operator-(const VecTerm& o) const;
  VecTerm operator-() const;
  VecTerm scaled(const Rat& c) const;

  bool is_constant() const { return coeffs_.empty(); }
  bool is_zero() const { return coeffs_.empty() && constant_.is_zero(); }
  const Rat& constant_part() const { return constant_; }
  Rat coeff(const Var& x) const;
  const std::map<Var, Rat>& coeffs() const { return coeffs_; }
  bool mentions(const Var& x) const { return coeffs_.count(x) != 0; }
  std::set<Var> vars() const;

  VecTerm subst(const Var& x, const VecTerm& by) const;

  bool operator==(const VecTerm& o) const {
    return constant_ == o.constant_ && coeffs_ == o.coeffs_;
  }
  bool operator!=(const VecTerm& o) const { return !(*this == o); }
  bool operator<(const VecTerm& o) const;

  std::string str() const;

 private:
  std::map<Var, Rat> coeffs_;
  Rat constant_;
};

/** A valuation application v_p(t) used as an atom of the value sort. */
struct VApp {
  Place place;
  VecTerm arg;

  bool operator==(const VApp& o) const {
    return place == o.place && arg == o.arg;
  }
  bool operator<(const VApp& o) const {
    if (place != o.place) return place < o.place;
    return arg < o.arg;
  }
};

/** Z-affine combination of value variables and valuation applications,
 * or the constant oo.
 *
 * v_p of a constant folds: a nonzero constant argument becomes an integer,
 * a zero argument makes the whole term oo (oo is absorbing, matching ValInt).
 */
class ValTerm {
 public:
  ValTerm() = default;
  static ValTerm constant(Int c);
  static ValTerm infinity();
  static ValTerm var(const Var& g);
  static ValTerm vapp(const Place& p, const VecTerm& t);

  ValTerm operator+(const ValTerm& o) const;
  ValTerm operator-(const ValTerm& o) const;
  ValTerm operator-() const;
  ValTerm scaled(const Int& c) const;

  bool is_infinite() const { return inf_; }
  bool is_constant() const { return !inf_ && vars_.empty() && vapps_.empty(); }
  const Int& constant_part() const { return constant_; }
  const std::map<Var, Int>& var_coeffs() const { return vars_; }
  const std::map<VApp, Int>& vapp_coeffs() const { return vapps_; }
  bool mentions_val(const Var& g) const { return !inf_ && vars_.count(g) != 0; }
  bool mentions_vec(const Var& x) const;
  std::set<Var> vec_vars() const;
  std::set<Var> val_vars() const;

  /** Substitutes a vector term for x inside every v_p argument. */
  ValTerm subst_vec(const Var& x, const VecTerm& by) const;
  /** Substitutes a value term for the value variable g. */
  ValTerm subst_val(const Var& g, const ValTerm& by) const;
  /** Substitutes a value term for one valuation application. */
  ValTerm subst_vapp(const VApp& ap, const ValTerm& by) const;

  bool operator==(const ValTerm& o) const {
    if (inf_ != o.inf_) return false;
    if (inf_) return true;
    return constant_ == o.constant_ && vars_ == o.vars_ && vapps_ == o.vapps_;
  }
  bool operator!=(const ValTerm& o) const { return !(*this == o); }
  bool operator<(const ValTerm& o) const;

  std::string str() const;

 private:
  bool inf_ = false;
  std::map<Var, Int> vars_;
  std::map<VApp, Int> vapps_;
  Int constant_ = 0;
};

}  // namespace placeq
