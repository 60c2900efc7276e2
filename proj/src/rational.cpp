#include "crn/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace crn {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

Rational parse_decimal(std::string_view s) {
  // [sign] digits [. digits] [e [sign] digits]
  std::string_view mant = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mant = s.substr(0, e);
    std::string_view ex = s.substr(e + 1);
    bool neg = false;
    if (!ex.empty() && (ex[0] == '+' || ex[0] == '-')) {
      neg = ex[0] == '-';
      ex.remove_prefix(1);
    }
    if (!all_digits(ex) || ex.size() > 6) throw std::invalid_argument("bad exponent");
    exponent = std::stol(std::string(ex));
    if (neg) exponent = -exponent;
  }
  std::string_view int_part = mant;
  std::string_view frac_part;
  if (auto dot = mant.find('.'); dot != std::string_view::npos) {
    int_part = mant.substr(0, dot);
    frac_part = mant.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("empty number");
  if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
    throw std::invalid_argument("not a number");
  std::string digits = std::string(int_part) + std::string(frac_part);
  mpz_class n(digits.empty() ? std::string("0") : digits, 10);
  Rational q(n);
  q *= pow10(exponent - static_cast<long>(frac_part.size()));
  q.canonicalize();
  return q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("empty number");
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  Rational q;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw std::invalid_argument("bad fraction '" + std::string(text) + "'");
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator");
    q = Rational(mpz_class(std::string(num), 10), d);
    q.canonicalize();
  } else {
    try {
      q = parse_decimal(s);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
  }
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  Rational q(x);  // mpq_set_d is exact
  return q;
}

std::vector<double> to_double(const RationalVector& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(q.get_d());
  return out;
}

RationalVector from_double(const std::vector<double>& v) {
  RationalVector out;
  out.reserve(v.size());
  for (double x : v) out.push_back(from_double(x));
  return out;
}

int sign(const Rational& q) { return sgn(q); }

}  // namespace crn
