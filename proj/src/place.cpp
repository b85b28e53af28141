#include "placeq/place.hpp"

#include <algorithm>

namespace placeq {

Place Place::finite(Int p) {
  if (!is_prime(p)) throw unsupported_error("place " + p.str() + " is not prime");
  Place pl;
  pl.p_ = std::move(p);
  return pl;
}

namespace {

std::vector<std::string> split_csv(std::string_view csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

Place parse_place(const std::string& tok) {
  if (tok == "inf") return Place::real();
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
        return std::isdigit(c);
      })) {
    throw unsupported_error("malformed place '" + tok + "'");
  }
  return Place::finite(Int(tok));
}

}  // namespace

Signature Signature::parse(std::string_view s0_csv, std::string_view m_csv) {
  std::vector<Place> s0, s1;
  for (const auto& tok : split_csv(s0_csv)) s0.push_back(parse_place(tok));
  if (m_csv.empty()) {
    for (const auto& p : s0) {
      if (p.is_finite()) s1.push_back(p);
    }
  } else {
    for (const auto& tok : split_csv(m_csv)) s1.push_back(parse_place(tok));
  }
  return of(std::move(s0), std::move(s1));
}

Signature Signature::of(std::vector<Place> s0, std::vector<Place> s1) {
  Signature sig;
  sig.s0_ = std::move(s0);
  sig.s1_ = std::move(s1);
  std::sort(sig.s0_.begin(), sig.s0_.end());
  sig.s0_.erase(std::unique(sig.s0_.begin(), sig.s0_.end()), sig.s0_.end());
  std::sort(sig.s1_.begin(), sig.s1_.end());
  sig.s1_.erase(std::unique(sig.s1_.begin(), sig.s1_.end()), sig.s1_.end());
  for (const auto& p : sig.s1_) {
    if (p.is_real()) {
      throw unsupported_error("M and Q are only available at finite places");
    }
    if (!sig.has(p)) {
      throw unsupported_error("place " + p.str() +
                              " carries M but is not a declared place");
    }
  }
  return sig;
}

bool Signature::has(const Place& p) const {
  return std::find(s0_.begin(), s0_.end(), p) != s0_.end();
}

bool Signature::has_mq(const Place& p) const {
  return std::find(s1_.begin(), s1_.end(), p) != s1_.end();
}

}  // namespace placeq
