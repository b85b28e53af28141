#include "placeq/rat.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <ostream>

namespace placeq {

namespace mp = boost::multiprecision;

bool is_prime(const Int& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (Int d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Rat::Rat(Int num, Int den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw arith_error("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  Int g = mp::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rat Rat::parse(std::string_view s) {
  auto bad = [&] { throw arith_error("malformed rational '" + std::string(s) + "'"); };
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  auto digits = [&]() -> Int {
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) bad();
    Int v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i++] - '0');
    }
    return v;
  };
  Int num = digits();
  Int den = 1;
  if (i < s.size() && s[i] == '/') {
    ++i;
    den = digits();
  }
  if (i != s.size()) bad();
  if (neg) num = -num;
  return Rat(std::move(num), std::move(den));
}

Rat Rat::operator+(const Rat& o) const {
  return Rat(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rat Rat::operator-(const Rat& o) const {
  return Rat(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Rat Rat::operator*(const Rat& o) const {
  return Rat(num_ * o.num_, den_ * o.den_);
}

Rat Rat::operator/(const Rat& o) const {
  if (o.num_ == 0) throw arith_error("division by zero");
  return Rat(num_ * o.den_, den_ * o.num_);
}

Rat Rat::operator-() const {
  Rat r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

std::string Rat::str() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

namespace {

// Exact multiplicity of p in a nonzero integer.
Int multiplicity(Int n, const Int& p) {
  Int m = 0;
  while (n % p == 0) {
    n /= p;
    ++m;
  }
  return m;
}

}  // namespace

ValInt vp(const Rat& a, const Int& p) {
  if (!is_prime(p)) throw arith_error("vp at non-prime " + p.str());
  if (a.is_zero()) return ValInt::infinity();
  Int n = a.num() < 0 ? Int(-a.num()) : a.num();
  return ValInt(multiplicity(n, p) - multiplicity(a.den(), p));
}

bool abs_le_p(const Rat& a, const Rat& b, const Int& p) {
  return vp(b, p) <= vp(a, p);
}

bool abs_le_inf(const Rat& a, const Rat& b) {
  // |a|<=|b| iff a^2 <= b^2; cross-multiplied to stay in integers.
  Int lhs = a.num() * a.num() * b.den() * b.den();
  Int rhs = b.num() * b.num() * a.den() * a.den();
  return lhs <= rhs;
}

}  // namespace placeq
