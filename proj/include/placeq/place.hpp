#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "placeq/rat.hpp"

namespace placeq {

/** A place of Q: a finite prime or the real (archimedean) place. */
class Place {
 public:
  static Place finite(Int p);
  static Place real() { return Place(); }

  bool is_finite() const { return p_.has_value(); }
  bool is_real() const { return !p_.has_value(); }
  /** The prime; throws internal_error at the real place. */
  const Int& prime() const {
    if (!p_) throw internal_error("prime() at the real place");
    return *p_;
  }

  bool operator==(const Place& o) const { return p_ == o.p_; }
  bool operator!=(const Place& o) const { return !(*this == o); }
  /** Finite places in prime order, then the real place. */
  bool operator<(const Place& o) const {
    if (p_ && o.p_) return *p_ < *o.p_;
    return p_.has_value() && !o.p_.has_value();
  }

  std::string str() const { return p_ ? p_->str() : "inf"; }

 private:
  Place() = default;
  std::optional<Int> p_;
};

/** The declared places: S0 carries the comparison predicate L, and the
 * finite subset S1 additionally carries M and Q. */
class Signature {
 public:
  /** Builds from CSV lists such as "2,3,inf"; m_csv empty means
   * "all finite places of S0". Validates primality and S1 <= S0. */
  static Signature parse(std::string_view s0_csv, std::string_view m_csv);
  static Signature of(std::vector<Place> s0, std::vector<Place> s1);

  const std::vector<Place>& s0() const { return s0_; }
  const std::vector<Place>& s1() const { return s1_; }
  bool has(const Place& p) const;
  bool has_mq(const Place& p) const;
  bool has_real() const { return has(Place::real()); }

 private:
  std::vector<Place> s0_, s1_;
};

}  // namespace placeq
