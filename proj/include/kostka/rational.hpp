#pragma once

// Exact rational scalar layer: GMP-backed rationals, directed decimal
// rendering, grid rounding, and small integer helpers shared by every
// module. Nothing here may round silently; every lossy conversion takes
// an explicit direction.

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kostka {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

// Error taxonomy mirrored by the CLI exit codes.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct degenerate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct boundary_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct certify_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Integer num(const Rational& x) { return numerator(x); }
inline Integer den(const Rational& x) { return denominator(x); }

// Floor division on integers (quotient rounded toward -infinity).
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
  return -floor_div(-a, b);
}

inline Integer floor_int(const Rational& x) { return floor_div(num(x), den(x)); }
inline Integer ceil_int(const Rational& x) { return ceil_div(num(x), den(x)); }

inline bool is_integer(const Rational& x) { return den(x) == 1; }

// Smallest k >= 0 with 2^k >= x. Requires x > 0.
inline long ceil_log2(const Rational& x) {
  if (x <= 0) throw std::invalid_argument("ceil_log2: argument must be positive");
  long k = 0;
  Rational p = 1;
  while (p < x) {
    p *= 2;
    ++k;
  }
  return k;
}

inline Integer pow_int(const Integer& base, unsigned long e) {
  Integer r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline Rational pow_rat(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  if (e < 0) {
    if (base == 0) throw std::invalid_argument("pow_rat: zero to negative power");
    return Rational(1) / pow_rat(base, -e);
  }
  Rational r = 1, b = base;
  unsigned long k = static_cast<unsigned long>(e);
  while (k) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

inline Integer factorial(unsigned n) {
  Integer r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

// Largest s with s^2 <= a. Requires a >= 0.
inline Integer isqrt(const Integer& a) {
  if (a < 0) throw std::invalid_argument("isqrt: negative argument");
  return sqrt(a);
}

// Smallest integer s with s^2 >= a (a >= 0).
inline Integer ceil_isqrt(const Integer& a) {
  Integer s = isqrt(a);
  if (s * s < a) ++s;
  return s;
}

// Smallest integer s with s^2 >= x, for rational x >= 0.
inline Integer ceil_sqrt_rat(const Rational& x) {
  Integer s = ceil_isqrt(ceil_int(x));
  while (Rational(s) * s < x) ++s;
  return s;
}

// Directed rounding onto the 2^-bits grid; Down means toward -infinity.
inline Rational round_down_bits(const Rational& x, unsigned bits) {
  Integer scaled = floor_div(num(x) << bits, den(x));
  return Rational(scaled, Integer(1) << bits);
}

inline Rational round_up_bits(const Rational& x, unsigned bits) {
  Integer scaled = ceil_div(num(x) << bits, den(x));
  return Rational(scaled, Integer(1) << bits);
}

// Bit size of the representation, used by precision caps.
inline std::size_t rep_bits(const Rational& x) {
  return msb(abs(num(x)) + 1) + msb(den(x)) + 2;
}

enum class RoundDir { Down, Up };

namespace detail {

// 10^e as a rational for signed e.
inline Rational pow10(long e) {
  Integer p = pow_int(Integer(10), static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(1, p) : Rational(p);
}

}  // namespace detail

// Exact parse of "p/q", integer, or decimal strings (with optional
// exponent). No float round-trip: "0.1" becomes exactly 1/10.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw input_error("empty numeric string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string p = s.substr(0, slash), q = s.substr(slash + 1);
    if (p.empty() || q.empty()) throw input_error("malformed fraction: " + s);
    try {
      Integer pn(p), qn(q);
      if (qn == 0) throw input_error("zero denominator: " + s);
      return Rational(pn, qn);
    } catch (const std::exception&) {
      throw input_error("malformed fraction: " + s);
    }
  }
  std::string t = s;
  long exp10 = 0;
  auto epos = t.find_first_of("eE");
  if (epos != std::string::npos) {
    try {
      exp10 = std::stol(t.substr(epos + 1));
    } catch (const std::exception&) {
      throw input_error("malformed exponent: " + s);
    }
    t = t.substr(0, epos);
  }
  auto dot = t.find('.');
  std::string digits = t;
  long frac_len = 0;
  if (dot != std::string::npos) {
    digits = t.substr(0, dot) + t.substr(dot + 1);
    frac_len = static_cast<long>(t.size() - dot - 1);
  }
  if (digits.empty() || digits == "-" || digits == "+")
    throw input_error("malformed number: " + s);
  // Leading zeros would make the GMP string constructor parse octal.
  bool neg = false;
  if (digits[0] == '+' || digits[0] == '-') {
    neg = digits[0] == '-';
    digits.erase(0, 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw input_error("malformed number: " + s);
  auto nz = digits.find_first_not_of('0');
  digits = (nz == std::string::npos) ? "0" : digits.substr(nz);
  if (neg && digits != "0") digits.insert(digits.begin(), '-');
  try {
    Integer m(digits);
    return Rational(m) * detail::pow10(exp10 - frac_len);
  } catch (const std::exception&) {
    throw input_error("malformed number: " + s);
  }
}

inline std::string to_fraction_string(const Rational& x) {
  std::string r = num(x).str();
  if (den(x) != 1) r += "/" + den(x).str();
  return r;
}

// Decimal rendering with `sig` significant digits and directed rounding.
// Endpoint rendering of certified brackets must pass Down for lower ends
// and Up for upper ends so printed brackets still contain the truth.
inline std::string to_decimal_string(const Rational& x, int sig, RoundDir dir) {
  if (sig < 1) throw std::invalid_argument("to_decimal_string: sig < 1");
  if (x == 0) return "0";
  bool neg = x < 0;
  Rational a = abs(x);
  // e = floor(log10(a)).
  long e = 0;
  {
    Rational p = 1;
    if (a >= 1) {
      while (p * 10 <= a) {
        p *= 10;
        ++e;
      }
    } else {
      while (p > a) {
        p /= 10;
        --e;
      }
    }
  }
  // Scale so that the integer part carries exactly `sig` digits.
  long shift = sig - 1 - e;
  Rational scaled = a * detail::pow10(shift);
  bool round_up_mag = (dir == RoundDir::Up) != neg;  // away from the bound
  Integer digits_int = round_up_mag ? ceil_int(scaled) : floor_int(scaled);
  std::string digits = digits_int.str();
  if (static_cast<long>(digits.size()) > sig) {  // carry overflowed, e.g. 999->1000
    ++e;
    shift = sig - 1 - e;
    scaled = a * detail::pow10(shift);
    digits_int = round_up_mag ? ceil_int(scaled) : floor_int(scaled);
    digits = digits_int.str();
  }
  while (static_cast<long>(digits.size()) < sig) digits = "0" + digits;
  std::string out;
  if (e >= 0 && e < 15) {
    if (e + 1 >= static_cast<long>(digits.size())) {
      out = digits + std::string(e + 1 - digits.size(), '0');
    } else {
      out = digits.substr(0, e + 1) + "." + digits.substr(e + 1);
    }
  } else if (e < 0 && e > -5) {
    out = "0." + std::string(-e - 1, '0') + digits;
  } else {
    out = digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(e);
  }
  // Trim trailing zeros after a decimal point (keeps output canonical).
  if (out.find('.') != std::string::npos && out.find('e') == std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return neg ? "-" + out : out;
}

inline Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational norm_sq(const std::vector<Rational>& a) { return dot(a, a); }

}  // namespace kostka
