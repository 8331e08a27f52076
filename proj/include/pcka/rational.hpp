#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcka {

// All probabilities and weights are exact rationals; there are no
// floating-point tolerances anywhere in the library.
using Rat = boost::multiprecision::cpp_rational;

inline bool is_probability(const Rat& r) { return r > 0 && r <= 1; }

// Accepts "p/q", an integer, or a finite decimal ("0.2" reads as 1/5).
inline Rat rat_from_string(std::string_view s) {
  auto fail = [&] {
    throw std::invalid_argument("bad rational: '" + std::string(s) + "'");
  };
  if (s.empty()) fail();
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '-') { neg = true; ++i; }
  if (i == s.size()) fail();

  boost::multiprecision::cpp_int num = 0, den = 1;
  bool any_digit = false;
  for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
    num = num * 10 + (s[i] - '0');
    any_digit = true;
  }
  if (!any_digit) fail();
  if (i < s.size() && s[i] == '.') {
    ++i;
    bool frac_digit = false;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
      num = num * 10 + (s[i] - '0');
      den *= 10;
      frac_digit = true;
    }
    if (!frac_digit) fail();
  } else if (i < s.size() && s[i] == '/') {
    ++i;
    boost::multiprecision::cpp_int d = 0;
    bool den_digit = false;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
      d = d * 10 + (s[i] - '0');
      den_digit = true;
    }
    if (!den_digit || d == 0) fail();
    den = d;
  }
  if (i != s.size()) fail();
  Rat r(num, den);
  return neg ? Rat(-r) : r;
}

// Canonical form: reduced "p/q", or just "p" for integers.
inline std::string rat_to_string(const Rat& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

}  // namespace pcka
