#pragma once

// Certified evaluation of log S_lambda(x), the log of the continuous Schur
// function, and of its gradient. At points with pairwise distinct entries
//
//   S_lambda(x) = det[exp(x_i lambda_j)] / prod_{i<j} (x_i - x_j),
//
// so evaluation perturbs x onto a gapped grid, certifies the determinant
// of exponentials, and subtracts the exact Vandermonde log. Two
// determinant paths share one output contract:
//   - budget: entries approximated to relative 1/(2 D') where the single
//     precision denominator D' is sized in advance from a floor on the
//     determinant; used when bits(D') fits under the precision cap.
//   - adaptive: interval entries refined geometrically until the enclosure
//     is positive and tight; used past the cap and for all gradients,
//     whose row-scaled numerator determinants can take either sign.
// Inputs whose required series lengths exceed desk scale fail with
// resource_error rather than degrade the certification.

#include "kostka/certarith.hpp"
#include "kostka/domain.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace kostka {

// Default ceiling on bits of per-entry precision. Sized so that desk-scale
// points (n <= 5, coordinates up to ~10) certify, while far-field requests
// whose intrinsic cancellation depth is astronomical are refused.
constexpr long kDefaultPrecisionBitCap = 4096;

// Everything needed to certify one determinant of exponentials at one
// perturbed point. v_log_floor is a proven lower bound on log of the
// determinant, D_prime the per-entry precision denominator of the budget
// path, tau_entry the largest |x_hat_i lambda_j|, and entry_mag_bound a
// power of two dominating every matrix entry magnitude exp(x_hat_i
// lambda_j). D_prime >= 2n * max(1, 32 n! max(tau_entry, entry_mag_bound)^n
// v' / delta) with v' = 2^ceil(13B/9) >= 1/v.
struct SchurEvalPlan {
  std::vector<Rational> x_hat;      // perturbed point, strictly decreasing
  Integer L;                        // integer Lipschitz bound >= ||lambda||
  Integer T;                        // 2n(n-1) * lcm of lambda denominators
  std::vector<Integer> lambda_hat;  // T*lambda_i - (n-i); nonneg, gaps >= 1
  Rational v_log_floor;             // log det >= v_log_floor
  Integer D_prime;                  // per-entry precision denominator
  Rational tau_entry;               // max |x_hat_i lambda_j|
  Rational entry_mag_bound;         // power of two >= every entry magnitude
  Integer v_prime;                  // integer >= 1/v; 0 when beyond exact build
  long budget_bits = 0;             // bit length of D_prime
};

// x_i + (n-i) * delta / (2 n^2 L) for 1-based i: strictly decreasing
// output with consecutive gaps >= delta/(2 n^2 L) and
// ||x - x_hat|| < delta/(4L).
inline std::vector<Rational> perturb_distinct(const std::vector<Rational>& x,
                                              const Rational& delta, const Integer& L) {
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("perturb_distinct: delta outside (0,1)");
  if (L < 1) throw std::invalid_argument("perturb_distinct: L must be positive");
  const std::size_t n = x.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (x[i] < x[i + 1]) throw std::invalid_argument("perturb_distinct: input not sorted");
  Rational step = delta / (2 * Integer(n) * Integer(n) * L);
  std::vector<Rational> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + Rational(Integer(n - 1 - i)) * step;
  return out;
}

namespace detail {

// Upper bound on log of a positive rational.
inline Rational log_upper(const Rational& x) {
  return log_approx(x, Rational(1, 16)) + Rational(1, 16);
}

// Smallest practical integer e with 2^e >= exp(t) for t >= 0, via
// 13/9 > 1/log(2).
inline Integer exp2_exponent_bound(const Rational& t) {
  if (t <= 0) return Integer(0);
  return ceil_int(13 * t / 9);
}

// Bit lengths beyond this are refused outright; the associated series
// lengths would be billions of terms.
constexpr long kBudgetBitsSanity = 1L << 26;
// Exact construction limit for D_prime; beyond it only the bit-length
// estimate matters, and D_prime is an upper-rounded power of two.
constexpr long kExactBudgetBits = 1L << 21;

}  // namespace detail

// Precision plan for the point x_sorted (descending) at accuracy delta.
inline SchurEvalPlan build_schur_plan(const Partition& lambda,
                                      const std::vector<Rational>& x_sorted,
                                      const Rational& delta) {
  const std::size_t n = lambda.n();
  if (x_sorted.size() != n) throw input_error("build_schur_plan: dimension mismatch");
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("build_schur_plan: delta outside (0,1)");

  SchurEvalPlan plan;
  plan.L = ceil_sqrt_rat(norm_sq(lambda.parts));
  if (plan.L < 1) plan.L = 1;
  plan.x_hat = perturb_distinct(x_sorted, delta, plan.L);

  Integer lden = 1;
  for (const Rational& p : lambda.parts) lden = lcm(lden, den(p));
  plan.T = 2 * Integer(n) * Integer(n - 1) * lden;

  plan.lambda_hat.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational scaled = Rational(plan.T) * lambda.parts[i];
    plan.lambda_hat[i] = num(scaled) - Integer(n - 1 - i);
    if (plan.lambda_hat[i] < 0)
      throw certify_error("build_schur_plan: shifted weight went negative");
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (plan.lambda_hat[i] - plan.lambda_hat[i + 1] < 1)
      throw certify_error("build_schur_plan: shifted weight gaps collapsed");

  Rational xl_max;
  bool have = false;
  plan.tau_entry = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational prod = plan.x_hat[i] * lambda.parts[j];
      if (!have || prod > xl_max) {
        xl_max = prod;
        have = true;
      }
      plan.tau_entry = std::max(plan.tau_entry, Rational(abs(prod)));
    }

  // Floor on the determinant: |log v| <= (1+||x||)(1+||lambda||)
  //                                      + n^2 max(1, log(4 n^2 |lambda| T / delta)).
  Rational nx_up = sqrt_interval(norm_sq(x_sorted), 32).hi;
  Rational nl_up = sqrt_interval(norm_sq(lambda.parts), 32).hi;
  Rational abs_lambda = 0;
  for (const Rational& p : lambda.parts) abs_lambda += p;
  Rational logarg = 4 * Integer(n) * Integer(n) * abs_lambda * Rational(plan.T) / delta;
  Rational big_b = (1 + nx_up) * (1 + nl_up) +
                   Integer(n) * Integer(n) *
                       std::max(Rational(1), detail::log_upper(logarg));
  plan.v_log_floor = -big_b;

  Integer a = detail::exp2_exponent_bound(xl_max);
  Integer b = ceil_int(13 * big_b / 9);
  if (a > detail::kBudgetBitsSanity || b > detail::kBudgetBitsSanity)
    throw resource_error("build_schur_plan: precision budget beyond desk scale");
  long a_l = a.convert_to<long>();
  long b_l = b.convert_to<long>();

  long tau_bits = a_l;
  if (plan.tau_entry > 1)
    tau_bits = std::max(tau_bits, static_cast<long>(msb(ceil_int(plan.tau_entry))) + 1);
  long fixed_bits = static_cast<long>(msb(32 * factorial(static_cast<unsigned>(n)))) + 1 +
                    static_cast<long>(msb(ceil_int(1 / delta))) + 1 +
                    static_cast<long>(msb(Integer(2 * n))) + 1;
  long est = fixed_bits + static_cast<long>(n) * tau_bits + b_l + 2;

  if (est <= detail::kExactBudgetBits) {
    plan.v_prime = Integer(1) << b_l;
    plan.entry_mag_bound = Rational(Integer(1) << a_l);
    Rational tau_budget = std::max(plan.entry_mag_bound, plan.tau_entry);
    Rational need = 32 * Rational(factorial(static_cast<unsigned>(n))) *
                    pow_rat(tau_budget, static_cast<long>(n)) * Rational(plan.v_prime) / delta;
    plan.D_prime = 2 * Integer(n) * std::max(Integer(1), ceil_int(need));
    plan.budget_bits = static_cast<long>(msb(plan.D_prime)) + 1;
  } else {
    // Too large to materialize usefully; an upper-rounded power of two
    // keeps the lower-bound invariant while the caller goes adaptive.
    plan.v_prime = 0;
    plan.entry_mag_bound = Rational(Integer(1) << std::min(a_l, detail::kExactBudgetBits));
    plan.D_prime = Integer(2 * n) << est;
    plan.budget_bits = est + static_cast<long>(msb(Integer(2 * n))) + 2;
  }
  return plan;
}

namespace detail {

// Point approximation of exp(arg) with relative error <= d, both signs.
inline Rational exp_point_approx(const Rational& arg, const Rational& d) {
  if (arg >= 0) return 1 / exp_neg_approx(arg, d);
  return exp_neg_approx(-arg, d);
}

// Determinant of exponentials via the precomputed budget: entries at
// relative 1/(2 D'), so the certified relative error lands under
// delta/32, and the log costs another delta/16.
inline Interval log_det_budget(const Partition& lambda, const SchurEvalPlan& plan,
                               const Rational& delta) {
  const std::size_t n = lambda.n();
  Rational d_series = Rational(Integer(1), 8 * plan.D_prime);

  // Snapping the series output to a shared power-of-two grid keeps row
  // denominators aligned for the exact elimination. The grid must sit
  // below the smallest entry magnitude times 1/(8 D').
  Rational xl_min;
  bool have = false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational prod = plan.x_hat[i] * lambda.parts[j];
      if (!have || prod < xl_min) {
        xl_min = prod;
        have = true;
      }
    }
  long extra = 0;
  if (xl_min < 0) extra = ceil_int(-3 * xl_min / 2).convert_to<long>();
  unsigned grid = static_cast<unsigned>(plan.budget_bits + extra + 8);

  RationalMatrix mp(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational t = exp_point_approx(plan.x_hat[i] * lambda.parts[j], d_series);
      mp.at(i, j) = round_down_bits(t, grid);
    }

  CertifiedValue det = det_certified(mp, Rational(Integer(1), plan.D_prime),
                                     plan.entry_mag_bound, Rational(Integer(1), plan.v_prime));
  return log_interval(det.to_interval(), delta / 16);
}

// Interval entries exp(x_hat_i lambda_j) at relative ~2^-k, rounded
// outward so representation sizes track k instead of the series length.
inline std::vector<Interval> exp_entries(const std::vector<Rational>& lambda_parts,
                                         const std::vector<Rational>& x_hat, long k) {
  const std::size_t n = x_hat.size();
  Rational d = pow_rat(Rational(1, 2), k);
  std::vector<Interval> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.push_back(exp_interval(x_hat[i] * lambda_parts[j], d)
                        .rounded_out_rel(static_cast<unsigned>(k + 8)));
  return out;
}

// Precision step: jump far enough that the measured deficit closes in
// one round when the error scales like 2^-k. The cap itself is always
// attempted before giving up.
inline long next_precision(long k, long cap, const Rational& deficit) {
  if (k >= cap) return cap + 1;
  long jump = 32;
  if (deficit > 1) jump = std::max(jump, ceil_log2(deficit) + 4);
  return std::min(cap, std::max(k + jump, std::min(2 * k, cap)));
}

// Adaptive enclosure of log det[exp(x_hat_i lambda_j)] with radius
// <= budget. Requires the determinant to certify positive under the cap.
inline Interval log_det_adaptive(const std::vector<Rational>& lambda_parts,
                                 const std::vector<Rational>& x_hat, const Rational& budget,
                                 long cap) {
  const std::size_t n = x_hat.size();
  long k = 64;
  while (k <= cap) {
    std::vector<Interval> ent = exp_entries(lambda_parts, x_hat, k);
    Interval d = det_interval(ent, n);
    if (d.is_positive() && d.width() / d.lo <= budget)
      return log_interval(d, budget / 4);
    Rational deficit;
    if (d.is_positive())
      deficit = (d.width() / d.lo) / budget;
    else if (d.mid() > 0)
      deficit = (d.width() / d.mid()) / budget;
    else
      deficit = Rational(Integer(1) << std::min(k, 1024L));
    k = next_precision(k, cap, deficit);
  }
  throw resource_error("log_det_adaptive: indeterminate at precision cap");
}

inline void check_schur_inputs(const Partition& lambda, const std::vector<Rational>& x,
                               const Rational& delta) {
  if (x.size() != lambda.n()) throw input_error("schur evaluation: dimension mismatch");
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("schur evaluation: delta outside (0,1)");
  if (lambda.min_gap() < 1)
    throw input_error("schur evaluation: partition gaps must be at least 1");
  if (lambda.parts.back() < 0)
    throw input_error("schur evaluation: partition parts must be nonnegative");
}

}  // namespace detail

// Additive-delta certification of log S_lambda(x). The budget split:
// delta/4 for the perturbation bias, delta/8 for the determinant log,
// delta/8 for the Vandermonde log.
inline CertifiedValue log_schur(const Partition& lambda, const std::vector<Rational>& x,
                                const Rational& delta,
                                long precision_bit_cap = kDefaultPrecisionBitCap) {
  detail::check_schur_inputs(lambda, x, delta);
  const std::size_t n = lambda.n();

  std::vector<Rational> xs = x;
  std::sort(xs.begin(), xs.end(), std::greater<Rational>());
  SchurEvalPlan plan = build_schur_plan(lambda, xs, delta);

  Rational vander = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) vander *= plan.x_hat[i] - plan.x_hat[j];
  if (vander <= 0) throw certify_error("log_schur: perturbed Vandermonde not positive");
  Interval log_vander = log_interval(vander, delta / 8);

  Interval log_det =
      plan.budget_bits <= precision_bit_cap && plan.v_prime > 0
          ? detail::log_det_budget(lambda, plan, delta)
          : detail::log_det_adaptive(lambda.parts, plan.x_hat, delta / 4, precision_bit_cap);

  Interval r = (log_det - log_vander).widened(delta / 4);
  if (r.rad() > delta) throw certify_error("log_schur: assembled radius exceeds budget");
  return CertifiedValue::from_interval(r);
}

// Certified gradient of log S_lambda at x. Component i on the perturbed
// point is det(M with row i scaled entrywise by lambda_j)/det(M) minus
// the exact sum over j != i of 1/(x_hat_i - x_hat_j). The perturbation
// is tightened to delta/(n L): the Hessian of log S_lambda is the
// covariance of a distribution supported on vectors of norm ||lambda||,
// so its operator norm is at most L^2 and the bias stays under delta/4.
// Numerator determinants can take either sign, hence always intervals.
inline std::vector<CertifiedValue> grad_log_schur(const Partition& lambda,
                                                  const std::vector<Rational>& x,
                                                  const Rational& delta,
                                                  long precision_bit_cap = kDefaultPrecisionBitCap) {
  detail::check_schur_inputs(lambda, x, delta);
  const std::size_t n = lambda.n();

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&x](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  std::vector<Rational> xs(n);
  for (std::size_t k = 0; k < n; ++k) xs[k] = x[idx[k]];

  Integer L = ceil_sqrt_rat(norm_sq(lambda.parts));
  if (L < 1) L = 1;
  Rational d_pert = delta / (Integer(n) * L);
  std::vector<Rational> x_hat = perturb_distinct(xs, d_pert, L);

  std::vector<Rational> vander_der(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) vander_der[i] += 1 / (x_hat[i] - x_hat[j]);

  long k = 64;
  while (k <= precision_bit_cap) {
    std::vector<Interval> ent = detail::exp_entries(lambda.parts, x_hat, k);
    Interval den_iv = det_interval(ent, n);
    if (den_iv.is_positive()) {
      std::vector<Interval> g(n);
      Rational worst = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Interval> scaled = ent;
        for (std::size_t j = 0; j < n; ++j) scaled[i * n + j] = ent[i * n + j] * lambda.parts[j];
        Interval num_iv = det_interval(scaled, n);
        g[i] = num_iv / den_iv - Interval(vander_der[i]);
        worst = std::max(worst, g[i].rad());
      }
      if (worst <= delta / 2) {
        std::vector<CertifiedValue> out(n, CertifiedValue::additive(Rational(0), Rational(0)));
        for (std::size_t s = 0; s < n; ++s)
          out[idx[s]] = CertifiedValue::from_interval(g[s].widened(delta / 4));
        return out;
      }
      k = detail::next_precision(k, precision_bit_cap, worst / (delta / 2));
    } else if (den_iv.mid() > 0) {
      k = detail::next_precision(k, precision_bit_cap, (den_iv.width() / den_iv.mid()) * 16);
    } else {
      k = detail::next_precision(k, precision_bit_cap, Rational(Integer(1) << std::min(k, 1024L)));
    }
  }
  throw resource_error("grad_log_schur: indeterminate at precision cap");
}

// Certified truth of log S_lambda(x) >= log S_mu(x) for mu dominated by
// lambda (equal totals, lambda prefix sums never smaller). At x = 0 both
// sides reduce to exact rational polytope volumes. Elsewhere both sides
// must satisfy the evaluation preconditions; the comparison refines until
// the enclosures separate.
inline bool schur_monotonicity_check(const Partition& lambda, const Partition& mu,
                                     const std::vector<Rational>& x,
                                     long precision_bit_cap = kDefaultPrecisionBitCap) {
  const std::size_t n = lambda.n();
  if (mu.n() != n) throw input_error("schur_monotonicity_check: size mismatch");
  Rational pl = 0, pm = 0;
  for (std::size_t k = 0; k < n; ++k) {
    pl += lambda.parts[k];
    pm += mu.parts[k];
    if (pl < pm) throw input_error("schur_monotonicity_check: prefix dominance violated");
  }
  if (pl != pm) throw input_error("schur_monotonicity_check: totals differ");
  if (lambda.parts == mu.parts) return true;

  bool at_origin = true;
  for (const Rational& c : x)
    if (c != 0) at_origin = false;
  if (at_origin) {
    // S at the origin is the polytope volume prod_{i<j} (l_i - l_j)/(j - i).
    auto volume = [n](const Partition& p) {
      Rational v = 1;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          v *= (p.parts[i] - p.parts[j]) / Rational(Integer(j - i));
      return v;
    };
    return volume(lambda) >= volume(mu);
  }

  Rational dc(1, 16);
  for (int round = 0; round < 8; ++round) {
    Interval a = log_schur(lambda, x, dc, precision_bit_cap).to_interval();
    Interval b = log_schur(mu, x, dc, precision_bit_cap).to_interval();
    if (a.lo >= b.hi) return true;
    if (a.hi < b.lo) return false;
    dc /= 8;
  }
  throw resource_error("schur_monotonicity_check: comparison indeterminate");
}

}  // namespace kostka
