#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include "placeq/errors.hpp"

namespace placeq {

using Int = boost::multiprecision::cpp_int;

bool is_prime(const Int& n);

/** Element of the value group Z extended by a top element oo.
 *
 * oo is absorbing: oo + g = oo, and c * oo = oo for c != 0 (0 * oo = 0,
 * only reachable when a formula multiplies a vanished occurrence).
 * Every finite element is below oo.
 */
class ValInt {
 public:
  ValInt() : inf_(false), v_(0) {}
  ValInt(Int v) : inf_(false), v_(std::move(v)) {}
  ValInt(long long v) : inf_(false), v_(v) {}
  static ValInt infinity() {
    ValInt g;
    g.inf_ = true;
    return g;
  }

  bool is_infinite() const { return inf_; }
  /** Finite value; throws internal_error on oo. */
  const Int& finite() const {
    if (inf_) throw internal_error("finite() on oo");
    return v_;
  }

  ValInt operator+(const ValInt& o) const {
    if (inf_ || o.inf_) return infinity();
    return ValInt(v_ + o.v_);
  }
  ValInt operator-() const {
    if (inf_) return infinity();
    return ValInt(-v_);
  }
  ValInt operator-(const ValInt& o) const { return *this + (-o); }
  ValInt scaled(const Int& c) const {
    if (c == 0) return ValInt(0);
    if (inf_) return infinity();
    return ValInt(v_ * c);
  }

  bool operator==(const ValInt& o) const {
    return inf_ == o.inf_ && (inf_ || v_ == o.v_);
  }
  bool operator!=(const ValInt& o) const { return !(*this == o); }
  /** Total order with oo greatest. */
  bool operator<=(const ValInt& o) const {
    if (o.inf_) return true;
    if (inf_) return false;
    return v_ <= o.v_;
  }
  bool operator<(const ValInt& o) const { return *this <= o && *this != o; }
  bool operator>=(const ValInt& o) const { return o <= *this; }
  bool operator>(const ValInt& o) const { return o < *this; }

  std::string str() const { return inf_ ? "oo" : v_.str(); }

 private:
  bool inf_;
  Int v_;
};

inline ValInt min(const ValInt& a, const ValInt& b) { return a <= b ? a : b; }

/** Exact rational; always in lowest terms with positive denominator. */
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(long long n) : num_(n), den_(1) {}
  Rat(Int n) : num_(std::move(n)), den_(1) {}
  /** Throws arith_error if den == 0. */
  Rat(Int num, Int den);

  /** Parses "n" or "n/d" with optional leading '-'. Throws arith_error. */
  static Rat parse(std::string_view s);

  const Int& num() const { return num_; }
  const Int& den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  /** Throws arith_error on division by zero. */
  Rat operator/(const Rat& o) const;
  Rat operator-() const;
  Rat abs() const { return num_ >= 0 ? *this : -*this; }
  Rat inverse() const { return Rat(1) / *this; }

  bool operator==(const Rat& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const { return num_ * o.den_ < o.num_ * den_; }
  bool operator<=(const Rat& o) const { return num_ * o.den_ <= o.num_ * den_; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  std::string str() const;

 private:
  Int num_, den_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

/** p-adic valuation of a; vp(0) = oo. Throws arith_error if p is not prime. */
ValInt vp(const Rat& a, const Int& p);

/** |a|_p <= |b|_p, i.e. vp(a) >= vp(b). */
bool abs_le_p(const Rat& a, const Rat& b, const Int& p);

/** |a| <= |b| in the archimedean absolute value. */
bool abs_le_inf(const Rat& a, const Rat& b);

/** Totally ordered key usable in std::map (numeric order). */
struct RatLess {
  bool operator()(const Rat& a, const Rat& b) const { return a < b; }
};

}  // namespace placeq
