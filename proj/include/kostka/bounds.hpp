#ifndef KOSTKA_BOUNDS_HPP
#define KOSTKA_BOUNDS_HPP

// Assembly of the certified volume bracket. The bracket sandwiches the
// pattern polytope volume between
//
//   sqrt((n-1)!) exp(-n) exp(g*) / vol(pSH)   and
//   sqrt((n-1)!) exp(n/2) Gamma((n+1)/2) exp(g*) / (sqrt(pi) eps)^(n-1),
//
// where g* is the certified optimum of the tilted objective, vol(pSH)
// is the projected permutohedron volume, and eps the interiority margin
// from the conditioning record. All constants are certified: pi by a
// fixed rational bracket, half-integer Gamma by the exact recursion,
// exp and log by directed series. Directed rounding throughout keeps
// both ends valid bounds on the true volume.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "kostka/certarith.hpp"
#include "kostka/certified.hpp"
#include "kostka/conditioning.hpp"
#include "kostka/domain.hpp"
#include "kostka/optimize.hpp"

namespace kostka {

namespace detail {

// exp over an interval of exponents, ends rounded outward.
inline Interval exp_enclosure(const Interval& x, const Rational& delta) {
  return Interval(exp_interval(x.lo, delta).lo, exp_interval(x.hi, delta).hi);
}

// Outward single-end compaction. Optimizer endpoints are exact rationals
// with representations that can run to megabits; series arithmetic on
// them is quadratic in that size, so everything entering exp or log is
// first rounded to a magnitude-relative grid in the safe direction.
inline Rational compact_down(const Rational& x, unsigned bits) {
  return Interval(x, x).rounded_out_rel(bits).lo;
}
inline Rational compact_up(const Rational& x, unsigned bits) {
  return Interval(x, x).rounded_out_rel(bits).hi;
}

}  // namespace detail

// Volume of the unit ball in R^k. The pi power is split off by parity
// so the remaining factor is an exact rational: even k gives
// pi^(k/2) / (k/2)!, odd k gives pi^((k-1)/2) 4^m m! / (2m)! with
// m = (k+1)/2.
inline Interval ball_volume(unsigned k) {
  if (k < 1) throw input_error("ball_volume: dimension must be positive");
  if (k % 2 == 0) {
    unsigned h = k / 2;
    return pow_interval(pi_interval(), h) * Rational(1, factorial(h));
  }
  unsigned m = (k + 1) / 2;
  Rational coeff(pow_int(Integer(4), m) * factorial(m), factorial(2 * m));
  return pow_interval(pi_interval(), m - 1) * coeff;
}

struct PshVolume {
  Rational value;
  bool exact = true;  // false when value is only an upper bound
};

// Volume of the projected permutohedron: the convex hull of all
// permutations of lambda, with the last coordinate dropped. Up to the
// threshold this is the exact signed permutation sum
//
//   (1/(n-1)!) sum_sigma (sum_i lambda_i sigma(i))^(n-1)
//                        / prod_j (sigma(j) - sigma(j+1));
//
// beyond it, the closed-form upper bound lambda_1^(n-1) n^(2n).
inline PshVolume psh_volume(const Partition& lambda, std::size_t exact_threshold = 8) {
  const std::size_t n = lambda.n();
  if (n <= exact_threshold) {
    std::vector<long> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 1L);
    Rational total = 0;
    do {
      Rational s = 0;
      for (std::size_t i = 0; i < n; ++i) s += lambda.parts[i] * Integer(sigma[i]);
      Rational den = 1;
      for (std::size_t j = 0; j + 1 < n; ++j) den *= Integer(sigma[j] - sigma[j + 1]);
      total += pow_rat(s, static_cast<long>(n - 1)) / den;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return {total / factorial(static_cast<unsigned>(n - 1)), true};
  }
  if (lambda.parts[0] <= 0)
    throw input_error("psh_volume: closed-form bound needs a positive top part");
  Rational bound = pow_rat(lambda.parts[0], static_cast<long>(n - 1)) *
                   pow_int(Integer(n), 2 * static_cast<unsigned long>(n));
  return {bound, false};
}

struct VolumeBracket {
  CertifiedValue g_star;             // optimum bracket, normalized scale
  Rational lower;                    // certified lower bound on the input volume
  Rational upper;                    // certified upper bound; gate on upper_finite
  bool upper_finite = true;
  Interval F_estimate;               // enclosure of the point estimate, input scale
  PshVolume psh_volume;              // projection volume of the normalized lambda
  Interval approximation_ratio_log;  // encloses log(upper / lower) when finite
};

// Builds the bracket for the instance behind the normalization, folding
// the run tolerance into the optimum floor and un-normalizing both ends
// by the recorded scale factor. A zero interiority margin leaves the
// lower bound valid and flags the upper as infinite.
inline VolumeBracket assemble_bracket(const NormalizedInstance& inst,
                                      const ConditioningRecord& record,
                                      const OptimizationResult& opt,
                                      std::size_t postnikov_threshold = 8,
                                      const Rational& delta = Rational(1, Integer(1) << 40)) {
  if (!(delta > 0 && delta < 1)) throw input_error("assemble_bracket: delta outside (0,1)");
  const std::size_t n = inst.lambda.n();
  const unsigned m = static_cast<unsigned>(n - 1);
  const Rational& d = delta;
  const Rational half_n(Integer(n), 2);
  const Rational scale = inst.volume_factor();

  VolumeBracket out;
  out.g_star = opt.g_star;
  out.psh_volume = psh_volume(inst.lambda, postnikov_threshold);

  Interval g = opt.g_star.to_interval().rounded_out_rel(128);
  Interval sf = sqrt_factorial_interval(m);

  // The optimum floor is relaxed by the run tolerance: the generic
  // minimizer contract only promises a point within eps_opt of the
  // infimum, and the lower bound must hold for the true infimum.
  Rational floor_exp = exp_interval(g.lo - opt.eps_opt - Integer(n), d).lo;
  out.lower = detail::compact_down(
      Rational(sf.lo * floor_exp / out.psh_volume.value * scale), 128);

  if (!(record.epsilon.lo > 0)) {
    out.upper_finite = false;
    out.upper = out.lower;
    out.F_estimate = Interval(Rational(0), Rational(0));
    out.approximation_ratio_log = Interval(Rational(0), Rational(0));
    return out;
  }

  // The point estimate and the upper bound share the constant
  // B = sqrt((n-1)!) exp(n/2) / (b_{n-1} eps^{n-1}); the upper bound is
  // exactly the high end of the estimate's enclosure.
  Interval eps = record.epsilon.rounded_out_rel(128);
  Interval denom = ball_volume(m) * pow_interval(eps, m);
  Interval f_exp = detail::exp_enclosure(Interval(g.lo + half_n, g.hi + half_n), d);
  Interval f_norm = ((sf * f_exp / denom) * scale).rounded_out_rel(128);
  out.F_estimate = f_norm;
  out.upper = f_norm.hi;

  if (out.lower > out.upper) throw certify_error("volume bracket inverted");
  out.approximation_ratio_log =
      log_interval(Rational(out.upper / out.lower), d).rounded_out_rel(128);
  return out;
}

}  // namespace kostka

#endif  // KOSTKA_BOUNDS_HPP
