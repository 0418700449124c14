#pragma once

// Certified scalars: exact-endpoint intervals, the value+error wrapper
// used across module boundaries, and bracketed irrational constants
// (square roots, pi, half-integer gamma). Every operation returns an
// enclosure of the true value; widths are the caller's budget problem.

#include "kostka/rational.hpp"

#include <algorithm>
#include <optional>

namespace kostka {

struct Interval {
  Rational lo, hi;

  Interval() : lo(0), hi(0) {}
  Interval(Rational v) : lo(v), hi(v) {}
  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw std::invalid_argument("Interval: lo > hi");
  }

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  Rational rad() const { return (hi - lo) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool is_positive() const { return lo > 0; }

  // Magnitude bound max(|lo|, |hi|).
  Rational mag() const { return std::max(abs(lo), abs(hi)); }

  Interval operator-() const { return Interval(-hi, -lo); }
  Interval operator+(const Interval& o) const { return Interval(lo + o.lo, hi + o.hi); }
  Interval operator-(const Interval& o) const { return Interval(lo - o.hi, hi - o.lo); }

  Interval operator*(const Interval& o) const {
    Rational a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return Interval(std::min(std::min(a, b), std::min(c, d)),
                    std::max(std::max(a, b), std::max(c, d)));
  }

  Interval operator*(const Rational& s) const {
    return s >= 0 ? Interval(lo * s, hi * s) : Interval(hi * s, lo * s);
  }

  Interval operator/(const Interval& o) const {
    if (o.contains(Rational(0)))
      throw std::domain_error("Interval division by interval containing zero");
    return *this * Interval(Rational(1) / o.hi, Rational(1) / o.lo);
  }

  Interval widened(const Rational& slack) const {
    return Interval(lo - slack, hi + slack);
  }

  // Outward rounding onto the 2^-bits grid keeps representations small
  // between pipeline stages without losing soundness.
  Interval rounded_out(unsigned bits) const {
    return Interval(round_down_bits(lo, bits), round_up_bits(hi, bits));
  }

  // Relative outward rounding: grid scaled to the interval's magnitude,
  // so tiny values keep `bits` significant bits instead of collapsing.
  Interval rounded_out_rel(unsigned bits) const {
    Rational m = mag();
    if (m == 0) return *this;
    long scale = static_cast<long>(msb(num(m) + 1)) - static_cast<long>(msb(den(m)));
    long shift = static_cast<long>(bits) - scale;
    if (shift <= 0) return rounded_out(1);
    return rounded_out(static_cast<unsigned>(shift));
  }
};

inline Interval pow_interval(const Interval& base, unsigned e) {
  Interval r(Rational(1));
  for (unsigned i = 0; i < e; ++i) r = r * base;
  return r;
}

inline Interval min_interval(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
}

inline Interval max_interval(const Interval& a, const Interval& b) {
  return Interval(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

// Certified order test; nullopt when the enclosures overlap.
inline std::optional<bool> certified_less(const Interval& a, const Interval& b) {
  if (a.hi < b.lo) return true;
  if (b.hi < a.lo) return false;
  return std::nullopt;
}

// Value carried with a proven error radius. Additive mode encloses
// [value - error, value + error]; multiplicative mode encloses
// [value*(1-error), value*(1+error)] and requires value > 0, error < 1.
struct CertifiedValue {
  enum class Mode { Additive, Multiplicative };

  Rational value;
  Rational error;
  Mode mode = Mode::Additive;

  static CertifiedValue additive(Rational v, Rational e) {
    if (e < 0) throw std::invalid_argument("CertifiedValue: negative error");
    return CertifiedValue{std::move(v), std::move(e), Mode::Additive};
  }

  static CertifiedValue multiplicative(Rational v, Rational e) {
    if (v <= 0) throw std::invalid_argument("CertifiedValue: multiplicative value <= 0");
    if (e < 0 || e >= 1)
      throw std::invalid_argument("CertifiedValue: multiplicative error outside [0,1)");
    return CertifiedValue{std::move(v), std::move(e), Mode::Multiplicative};
  }

  static CertifiedValue from_interval(const Interval& iv) {
    return additive(iv.mid(), iv.rad());
  }

  Interval to_interval() const {
    if (mode == Mode::Additive) return Interval(value - error, value + error);
    return Interval(value * (1 - error), value * (1 + error));
  }

  Rational lower() const { return to_interval().lo; }
  Rational upper() const { return to_interval().hi; }
};

// Bracket of sqrt(x) with relative width about 2^-bits. Newton from
// above keeps hi >= sqrt(x) at every step; lo = x/hi <= sqrt(x).
inline Interval sqrt_interval(const Rational& x, unsigned bits = 96) {
  if (x < 0) throw std::domain_error("sqrt_interval: negative argument");
  if (x == 0) return Interval(Rational(0));
  long e = static_cast<long>(msb(num(x))) - static_cast<long>(msb(den(x)));
  long h = e / 2 + 1;
  Rational hi = h >= 0 ? Rational(Integer(1) << h) : Rational(1, Integer(1) << (-h));
  if (hi * hi < x) hi = x + 1;  // defensive; seed must start above the root
  // The termination test is relative, so the rounding grid must stay finer
  // than the root's magnitude or tiny arguments never converge.
  unsigned grid = bits + 16 + static_cast<unsigned>(h < 0 ? -h : 0);
  for (int it = 0; it < 20000; ++it) {
    Rational lo = x / hi;
    if (hi - lo <= hi / (Integer(1) << bits)) {
      // Round outward, then re-establish hi^2 >= x >= lo^2 on the grid.
      Rational rhi = round_up_bits(hi, grid);
      Rational rlo = round_down_bits(lo, grid);
      if (rlo < 0) rlo = 0;
      return Interval(rlo, rhi);
    }
    hi = (hi + lo) / 2;
    hi = round_up_bits(hi, grid);
    if (hi * hi < x) hi = x / hi;  // grid rounding undershot; restore invariant
    if (hi * hi < x) hi = (hi + x / hi) / 2 + Rational(1, Integer(1) << bits);
  }
  throw resource_error("sqrt_interval: no convergence");
}

// pi to 50 decimal digits, outward by one ulp of the last digit.
inline const Interval& pi_interval() {
  static const Interval v(
      parse_rational("3.14159265358979323846264338327950288419716939937510"),
      parse_rational("3.14159265358979323846264338327950288419716939937511"));
  return v;
}

// Gamma(p/2) for positive integer p. Even p is exact; odd p is a
// rational multiple of sqrt(pi).
inline Interval gamma_half_interval(unsigned p, unsigned bits = 96) {
  if (p == 0) throw std::domain_error("gamma_half_interval: pole at 0");
  if (p % 2 == 0) return Interval(Rational(factorial(p / 2 - 1)));
  unsigned m = (p - 1) / 2;  // Gamma(m + 1/2)
  Rational coeff(factorial(2 * m), pow_int(Integer(4), m) * factorial(m));
  Interval sqrt_pi = sqrt_interval(pi_interval().lo, bits);
  sqrt_pi.hi = sqrt_interval(pi_interval().hi, bits).hi;
  return sqrt_pi * coeff;
}

inline Interval sqrt_factorial_interval(unsigned k, unsigned bits = 96) {
  return sqrt_interval(Rational(factorial(k)), bits);
}

// Euclidean norm bracket of a rational vector.
inline Interval norm_interval(const std::vector<Rational>& v, unsigned bits = 96) {
  return sqrt_interval(norm_sq(v), bits);
}

}  // namespace kostka
