#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace streamshare {

using Rational = mpq_class;
using Integer = mpz_class;
using RationalVector = std::vector<Rational>;

/// Parses "p/q", "p", or a finite decimal such as "0.25". Result is canonical.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t first = s.find_first_not_of(" \t");
  if (first == std::string::npos) throw std::invalid_argument("empty rational");
  s = s.substr(first);

  auto digits_only = [](std::string_view d) {
    if (d.empty()) return false;
    for (char c : d)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string_view body = s;
  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational out;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den))
      throw std::invalid_argument("malformed rational '" + s + "'");
    Integer d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    out = Rational(Integer(std::string(num)), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !digits_only(whole)) || !digits_only(frac))
      throw std::invalid_argument("malformed decimal '" + s + "'");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer w = whole.empty() ? Integer(0) : Integer(std::string(whole));
    out = Rational(w * scale + Integer(std::string(frac)), scale);
  } else {
    if (!digits_only(body))
      throw std::invalid_argument("malformed rational '" + s + "'");
    out = Rational(Integer(std::string(body)));
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

/// Lowest-terms "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Round-half-up (half away from zero for negatives) to `places` decimals.
inline std::string to_decimal(const Rational& q, unsigned places) {
  bool negative = sgn(q) < 0;
  Rational a = negative ? Rational(-q) : q;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  Rational scaled = a * scale + Rational(1, 2);
  Integer rounded;
  mpz_fdiv_q(rounded.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());

  std::string digits = rounded.get_str();
  if (places > 0) {
    if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
    digits.insert(digits.size() - places, ".");
  }
  if (negative && rounded != 0) digits.insert(0, "-");
  return digits;
}

inline Rational sum(const RationalVector& v) {
  Rational total = 0;
  for (const auto& x : v) total += x;
  return total;
}

inline Integer lcm_of_denominators(const RationalVector& v) {
  Integer l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

}  // namespace streamshare
