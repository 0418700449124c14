#pragma once

// Conditioning quantities of an instance: how far the weight sits from
// the permutohedron boundary, and the derived scale parameters that
// drive evaluation precision, the volume upper bound, and the search
// radius. All boundary distances reduce to the prefix-sum slacks
//   s_k = (top-k sum of lambda) - (top-k sum of mu)
//   c_k = (top-k sum of lambda) - k * mean(lambda)
// because the facet normals are subset indicators and the center and
// mu comparisons only bind at the sorted prefixes.

#include "kostka/certarith.hpp"
#include "kostka/domain.hpp"

namespace kostka {

struct ConditioningRecord {
  std::size_t n = 0;
  Rational lambda_gap;     // smallest consecutive gap of lambda
  Rational tau;            // largest dilation of (mu - center) staying inside
  Interval d_mu;           // distance from mu to the nearest facet hyperplane
  Interval r0;             // in-hyperplane ball radius around the center point
  Rational r;              // tau * lambda_gap / 4
  Interval delta_prime;    // r / (4 n^{3/2})
  Interval epsilon;        // conditioning parameter for the volume bounds
  bool epsilon_exact = false;  // epsilon.lo == epsilon.hi holds (gap branch decided)
  Interval domain_radius;  // search radius R for the tilt minimization
  std::vector<Rational> s; // prefix slacks of mu, k = 1..n-1
  std::vector<Rational> c; // prefix slacks of the center, k = 1..n-1
};

namespace detail {

inline void prefix_slacks(const Partition& lambda, const Weight& mu,
                          std::vector<Rational>& s, std::vector<Rational>& c) {
  const std::size_t n = lambda.n();
  auto pl = prefix_sums_desc(lambda.parts);
  auto pm = prefix_sums_desc(mu.sorted_desc());
  Rational mean = lambda.total() / Integer(n);
  s.resize(n - 1);
  c.resize(n - 1);
  for (std::size_t k = 1; k <= n - 1; ++k) {
    s[k - 1] = pl[k - 1] - pm[k - 1];
    c[k - 1] = pl[k - 1] - mean * Integer(k);
  }
}

}  // namespace detail

// tau = min(1, min_k s_k / c_k): the largest factor by which mu - center
// can be dilated while staying inside the permutohedron. Equals 0 exactly
// when mu lies on the boundary. Requires distinct parts (so c_k > 0).
inline Rational compute_tau(const Partition& lambda, const Weight& mu) {
  if (!majorizes(lambda, mu)) throw input_error("compute_tau: mu outside the permutohedron");
  if (lambda.min_gap() <= 0) throw degenerate_error("compute_tau: repeated parts");
  std::vector<Rational> s, c;
  detail::prefix_slacks(lambda, mu, s, c);
  Rational t = 1;
  for (std::size_t k = 0; k < s.size(); ++k) t = std::min(t, Rational(s[k] / c[k]));
  return t;
}

// Largest ball radius around the center point, inside the total-sum
// hyperplane: min over k of c_k * sqrt(n / (k (n-k))). The norm factor
// is the in-hyperplane length of a top-k facet normal.
inline Interval compute_r0(const Partition& lambda, unsigned bits = 96) {
  if (lambda.min_gap() <= 0) throw degenerate_error("compute_r0: repeated parts");
  const std::size_t n = lambda.n();
  std::vector<Rational> s, c;
  Weight center(std::vector<Rational>(n, lambda.total() / Integer(n)));
  detail::prefix_slacks(lambda, center, s, c);
  Interval best;
  bool first = true;
  for (std::size_t k = 1; k <= n - 1; ++k) {
    Interval f = sqrt_interval(Rational(Integer(n), Integer(k) * Integer(n - k)), bits);
    Interval v = f * c[k - 1];
    best = first ? v : min_interval(best, v);
    first = false;
  }
  return best;
}

// Distance from mu to the nearest permutohedron facet hyperplane:
// min_k s_k / sqrt(k).
inline Interval compute_d_mu(const Partition& lambda, const Weight& mu, unsigned bits = 96) {
  std::vector<Rational> s, c;
  detail::prefix_slacks(lambda, mu, s, c);
  Interval best;
  bool first = true;
  for (std::size_t k = 1; k <= s.size(); ++k) {
    Interval rk = sqrt_interval(Rational(Integer(k)), bits);
    Interval v = Interval(s[k - 1]) / rk;
    best = first ? v : min_interval(best, v);
    first = false;
  }
  return best;
}

// epsilon = (tau / sqrt(n)) * min(r0, lambda_gap / (16 n^{3/2})). The
// second branch always wins when the instance is nondegenerate (r0 is
// bounded below by lambda_gap * sqrt(n-1) / 2), in which case the n^{3/2}
// factors cancel against sqrt(n) and epsilon is the exact rational
// tau * lambda_gap / (16 n^2). The interval fallback covers the
// undecidable case without ever rounding the wrong way.
inline Interval compute_epsilon(const Partition& lambda, const Weight& mu,
                                bool* exact_out = nullptr, unsigned bits = 96) {
  const std::size_t n = lambda.n();
  Rational tau = compute_tau(lambda, mu);
  Rational gap = lambda.min_gap();
  Interval r0 = compute_r0(lambda, bits);
  Interval n32 = sqrt_interval(Rational(Integer(n) * Integer(n) * Integer(n)), bits);
  Interval branch2 = Interval(gap) / (n32 * Rational(16));
  Interval sqrt_n = sqrt_interval(Rational(Integer(n)), bits);
  Interval eps;
  bool exact;
  if (auto lt = certified_less(branch2, r0); lt.has_value() && *lt) {
    exact = true;
    eps = Interval(tau * gap / (16 * Integer(n) * Integer(n)));
  } else {
    exact = false;
    eps = (min_interval(r0, branch2) * tau) / sqrt_n;
  }
  // Integral interior instances carry a guaranteed floor.
  if (lambda.is_integral() && lambda.parts[0] > 0 && strictly_inside(lambda, mu) &&
      std::all_of(mu.w.begin(), mu.w.end(), [](const Rational& x) { return is_integer(x); })) {
    Rational floor = Rational(1) / (16 * lambda.parts[0] * Integer(n) * Integer(n) * Integer(n));
    if (eps.hi < floor)
      throw certify_error("compute_epsilon: integral-interior floor violated");
  }
  if (exact_out) *exact_out = exact;
  return eps;
}

// Search radius R = (1/eps) * max(sqrt(n) * max(0, log vol), C n^3 max(1,
// log 1/eps)) with C = 64; vol is the exact unconstrained-pattern volume
// prod (lambda_i - lambda_j)/(j - i). Boundary instances (eps = 0) have
// no finite radius and raise.
inline Interval compute_domain_radius(const Partition& lambda, const Interval& epsilon,
                                      unsigned bits = 96) {
  const std::size_t n = lambda.n();
  if (!(epsilon.lo > 0))
    throw boundary_error("compute_domain_radius: epsilon is zero on the boundary");
  Rational vol = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      vol *= (lambda.parts[i] - lambda.parts[j]) / Integer(j - i);
  const Rational log_delta(1, 1024);
  Interval log_vol = vol >= 1 ? log_interval(vol, log_delta) : Interval(Rational(0));
  if (log_vol.lo < 0) log_vol.lo = 0;  // clamp: only the positive part matters
  Interval sqrt_n = sqrt_interval(Rational(Integer(n)), bits);
  Interval b1 = sqrt_n * log_vol;
  Interval inv_eps = Interval(Rational(1)) / epsilon;
  Interval log_inv_eps = log_interval(inv_eps, log_delta);
  Interval b2 = max_interval(Interval(Rational(1)), log_inv_eps) *
                Rational(64 * Integer(n) * Integer(n) * Integer(n));
  return max_interval(b1, b2) * inv_eps;
}

inline ConditioningRecord compute_conditioning(const NormalizedInstance& inst,
                                               unsigned bits = 96) {
  ConditioningRecord rec;
  rec.n = inst.n();
  rec.lambda_gap = inst.lambda.min_gap();
  detail::prefix_slacks(inst.lambda, inst.mu, rec.s, rec.c);
  rec.tau = compute_tau(inst.lambda, inst.mu);
  rec.d_mu = compute_d_mu(inst.lambda, inst.mu, bits);
  rec.r0 = compute_r0(inst.lambda, bits);
  rec.r = rec.tau * rec.lambda_gap / 4;
  Interval n32 = sqrt_interval(Rational(Integer(rec.n) * Integer(rec.n) * Integer(rec.n)), bits);
  rec.delta_prime = Interval(rec.r) / (n32 * Rational(4));
  rec.epsilon = compute_epsilon(inst.lambda, inst.mu, &rec.epsilon_exact, bits);
  if (rec.epsilon.lo > 0)
    rec.domain_radius = compute_domain_radius(inst.lambda, rec.epsilon, bits);
  return rec;
}

}  // namespace kostka
