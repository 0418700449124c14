#pragma once

// Rational approximation kernels with proven error bounds. These are
// the only places where transcendental functions enter; everything
// above consumes their enclosures.
//
// Contracts (all errors are with respect to the true real value):
//   exp_neg_approx(x, d):  |exp(-x) - t| <= d*exp(-x), and the returned
//                          t also satisfies |exp(x) - 1/t| <= d*exp(x).
//   log_approx(x, d):      |log(x) - t| <= d.
//   log1m_exp_bound(z):    result >= |log(1 - exp(-z))|.
//   det_exact(M):          exact determinant, fraction-free elimination.
//   det_certified(...):    multiplicative enclosure of an exactly known
//                          matrix's determinant when its entries carry
//                          relative error, given a floor on |det|.

#include "kostka/certified.hpp"

#include <cstddef>

namespace kostka {

namespace detail {
// Series length guard: beyond this the input is outside desk scale.
constexpr long kMaxSeriesTerms = 400000;
}  // namespace detail

// Truncated exponential series sum_{i<=l} x^i/i!, evaluated by Horner.
inline Rational exp_series(const Rational& x, long l) {
  Rational acc = 1;
  for (long i = l; i >= 1; --i) acc = 1 + acc * x / i;
  return acc;
}

// Reciprocal truncated series approximation of exp(-x) for x >= 0.
// The series S_l(x) satisfies 0 <= 1/S_l(x) - exp(-x) <= 2^-l once
// l >= 2*ceil(log2(1/d) + x), which makes the error at most d*exp(-x).
inline Rational exp_neg_approx(const Rational& x, const Rational& delta) {
  if (x < 0) throw std::invalid_argument("exp_neg_approx: negative argument");
  if (delta <= 0 || delta >= 1)
    throw std::invalid_argument("exp_neg_approx: delta outside (0,1)");
  long l = 2 * (ceil_log2(Rational(1) / delta) + static_cast<long>(ceil_int(x))) + 2;
  if (l > detail::kMaxSeriesTerms)
    throw resource_error("exp_neg_approx: series length exceeds desk scale");
  return 1 / exp_series(x, l);
}

// Enclosure of exp(x) for rational x of either sign, relative width
// about 2*delta. Directed endpoints come from the one-sided series
// guarantee combined with the two-sided relative bound.
inline Interval exp_interval(const Rational& x, const Rational& delta) {
  if (x >= 0) {
    Rational t = exp_neg_approx(x, delta);  // approximates exp(-x)
    return Interval((1 - delta) / t, (1 + delta) / t);
  }
  Rational t = exp_neg_approx(-x, delta);
  return Interval(t / (1 + delta), t / (1 - delta));
}

namespace detail {

// log(1-z) = -sum_{i>=1} z^i/i for 0 <= z <= 1/3; truncation after k
// terms undershoots the magnitude by at most (3/2)*z^(k+1) <= (3/2)*3^-(k+1).
inline Rational log1m_series(const Rational& z, long k) {
  Rational acc = 0, p = z;
  for (long i = 1; i <= k; ++i) {
    acc += p / i;
    p *= z;
  }
  return -acc;
}

inline long log_terms_for(const Rational& budget) {
  // smallest k with (3/2)*3^-(k+1) <= budget
  long k = 1;
  Rational tail = Rational(3, 2) / 9;  // k = 1 tail
  while (tail > budget) {
    tail /= 3;
    ++k;
    if (k > detail::kMaxSeriesTerms) throw resource_error("log series too long");
  }
  return k;
}

}  // namespace detail

// Additive-error logarithm via range reduction x = y*(3/2)^m with
// y in (2/3, 1], then the log(1-z) series. x < 1 goes through the
// reciprocal. Error budget: delta/2 for the y-series, delta/(2m) for
// each of the m copies of log(3/2).
inline Rational log_approx(const Rational& x, const Rational& delta) {
  if (x <= 0) throw std::domain_error("log_approx: argument must be positive");
  if (delta <= 0) throw std::invalid_argument("log_approx: delta must be positive");
  if (x == 1) return 0;
  if (x < 1) return -log_approx(1 / x, delta);
  long m = 0;
  Rational p = 1;
  const Rational three_halves(3, 2);
  while (p < x) {
    p *= three_halves;
    ++m;
    if (m > 2000000) throw resource_error("log_approx: argument exceeds desk scale");
  }
  Rational y = x / p;  // in (2/3, 1]
  Rational zy = 1 - y;
  Rational r = detail::log1m_series(zy, detail::log_terms_for(delta / 2));
  if (m > 0) {
    // log(3/2) = -log(1 - 1/3), truncated low; m copies keep total under delta/2.
    Rational l32 = -detail::log1m_series(Rational(1, 3), detail::log_terms_for(delta / (2 * m)));
    r += l32 * m;
  }
  return r;
}

// Enclosure of log(x) with half-width delta.
inline Interval log_interval(const Rational& x, const Rational& delta) {
  Rational t = log_approx(x, delta);
  return Interval(t - delta, t + delta);
}

// Enclosure of the log of an interval of positive rationals.
inline Interval log_interval(const Interval& x, const Rational& delta) {
  if (!x.is_positive()) throw std::domain_error("log_interval: interval not positive");
  return Interval(log_approx(x.lo, delta) - delta, log_approx(x.hi, delta) + delta);
}

// Valid upper bound on |log(1 - exp(-z))| for z > 0, via the closed
// form max(1, log(2/z)) with the log replaced by a certified upper end.
inline Rational log1m_exp_bound(const Rational& z) {
  if (z <= 0) throw std::domain_error("log1m_exp_bound: z must be positive");
  if (z >= 2) return Rational(1);
  Rational b = log_approx(2 / z, Rational(1, 16)) + Rational(1, 16);
  return std::max(Rational(1), b);
}

// Dense square rational matrix, row-major.
struct RationalMatrix {
  std::size_t n = 0;
  std::vector<Rational> a;

  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t dim) : n(dim), a(dim * dim, Rational(0)) {}

  Rational& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

// Exact determinant. Rows are scaled to integers, then Bareiss
// fraction-free elimination keeps intermediate bit-lengths polynomial.
inline Rational det_exact(const RationalMatrix& m) {
  const std::size_t n = m.n;
  if (n == 0) return Rational(1);
  std::vector<Integer> w(n * n);
  Rational scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < n; ++j) l = lcm(l, den(m.at(i, j)));
    scale /= l;
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& e = m.at(i, j);
      w[i * n + j] = num(e) * (l / den(e));
    }
  }
  int sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (w[k * n + k] == 0) {
      std::size_t r = k + 1;
      while (r < n && w[r * n + k] == 0) ++r;
      if (r == n) return Rational(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(w[k * n + j], w[r * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = w[i * n + j] * w[k * n + k] - w[i * n + k] * w[k * n + j];
        w[i * n + j] = t / prev;  // divides exactly
      }
      w[i * n + k] = 0;
    }
    prev = w[k * n + k];
  }
  return Rational(w[n * n - 1]) * scale * sign;
}

// Relative determinant error bound for entrywise relative error d',
// entry magnitude bound tau, and determinant floor v.
inline Rational det_error_bound(std::size_t n, const Rational& tau, const Rational& v,
                                const Rational& entry_rel_err) {
  return Rational(factorial(static_cast<unsigned>(n))) * 2 * Integer(n) *
         pow_rat(tau, static_cast<long>(n)) * entry_rel_err / v;
}

// Determinant of a matrix whose entries approximate an unknown true
// matrix M with entrywise relative error entry_rel_err/2, |M_ij| <= tau,
// |det M| >= v > 0. Returns a multiplicative CertifiedValue whose
// interval contains det M. The raw bound is relative to det M, so the
// stored error is inflated to e/(1-e) to be relative to the stored value.
inline CertifiedValue det_certified(const RationalMatrix& m, const Rational& entry_rel_err,
                                    const Rational& tau, const Rational& v) {
  if (v <= 0) throw std::invalid_argument("det_certified: floor must be positive");
  if (entry_rel_err * 2 * Integer(m.n) >= 1)
    throw std::invalid_argument("det_certified: entry error too large for bound");
  Rational e = det_error_bound(m.n, tau, v, entry_rel_err);
  if (e >= 1)
    throw resource_error("det_certified: bound exceeds 1, precision insufficient");
  Rational t = det_exact(m);
  if (t <= 0)
    throw resource_error("det_certified: sign lost, precision insufficient");
  return CertifiedValue::multiplicative(t, e / (1 - e));
}

// Interval determinant for entrywise enclosures: exact determinant of
// the midpoint matrix plus the multilinear perturbation bound
// n * n! * taubar^(n-1) * w, where w is the largest halfwidth and
// taubar bounds every entry magnitude including its halfwidth.
inline Interval det_interval(const std::vector<Interval>& entries, std::size_t n) {
  if (entries.size() != n * n) throw std::invalid_argument("det_interval: size mismatch");
  RationalMatrix mid(n);
  Rational w = 0, taubar = 0;
  for (std::size_t i = 0; i < n * n; ++i) {
    mid.a[i] = entries[i].mid();
    w = std::max(w, entries[i].rad());
    taubar = std::max(taubar, entries[i].mag());
  }
  Rational d0 = det_exact(mid);
  Rational bound = Rational(factorial(static_cast<unsigned>(n))) * Integer(n) *
                   pow_rat(taubar, static_cast<long>(n) - 1) * w;
  return Interval(d0 - bound, d0 + bound);
}

}  // namespace kostka
