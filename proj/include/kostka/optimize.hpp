#ifndef KOSTKA_OPTIMIZE_HPP
#define KOSTKA_OPTIMIZE_HPP

// Minimization of the tilted objective
//
//   ghat(y) = log S_lambda((y, 0)) - (y, 0) . mu
//
// over the certified search ball of radius R + 3/2. The minimum of ghat
// equals the minimum of the coercive extension f = max(ghat, linear), and
// exp of the minimum feeds the volume bracket. The solver is a cutting
// plane bundle: every certified evaluation contributes one affine lower
// function, valid globally by convexity, and the run terminates when the
// exact-rational aggregated lower bound over the ball comes within eps_opt
// of the best certified value. Proposals are generated in floating point
// from interval midpoints; soundness rests only on the bundle certificate,
// never on the proposer.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <utility>
#include <vector>

#include "kostka/conditioning.hpp"
#include "kostka/schur.hpp"

namespace kostka {

struct OptConfig {
  Rational eps_opt = Rational(1, 1000);
  int max_domain_doublings = 8;
  long precision_bit_cap = kDefaultPrecisionBitCap;
  long max_iterations = 512;  // certified oracle evaluations, all attempts combined
};

struct OptimizationResult {
  std::vector<Rational> y_star;          // exact dyadic coordinates, n-1 of them
  CertifiedValue g_star;                 // bracket on the minimum of ghat
  long iterations = 0;                   // certified oracle evaluations used
  CertifiedValue stationarity_residual;  // bracket on ||grad log S(x*) - mu||
  int domain_doublings = 0;
  Rational eps_opt;                      // tolerance the run was asked to meet
};

// ghat(y) with the lift x = (y, 0). The tilt term is exact rational, so the
// whole accuracy budget goes to log_schur and the result carries its radius.
inline CertifiedValue ghat(const NormalizedInstance& inst, const std::vector<Rational>& y,
                           const Rational& delta,
                           long precision_bit_cap = kDefaultPrecisionBitCap) {
  if (y.size() + 1 != inst.n())
    throw input_error("ghat: y must have n-1 coordinates");
  std::vector<Rational> x = y;
  x.push_back(Rational(0));
  CertifiedValue ls = log_schur(inst.lambda, x, delta / 2, precision_bit_cap);
  return CertifiedValue::additive(ls.value - dot(x, inst.mu.w), ls.error);
}

// Constants of the coercive extension f(y) = max(ghat(y), v0 - C1 + C2 ||y||).
// v0 satisfies v0 <= ghat(0) <= v0 + 1, from the exact rational volume of the
// unconstrained pattern polytope. Gradients of log S range over the
// permutohedron of lambda, so every directional slope of ghat stays below
// ||lambda|| + ||mu|| < 2L = C2; C1 = 4L(R+2) then keeps the linear branch
// at or below ghat on the whole ball of radius R+2, so the extension leaves
// the minimum and its location unchanged.
struct ObjectiveContext {
  NormalizedInstance inst;
  ConditioningRecord record;
  Rational radius;  // R, upper end of the certified domain radius
  Integer lip;      // L = ceil ||lambda||
  Rational v0;
  Rational c1;
  Rational c2;
  long precision_bit_cap = kDefaultPrecisionBitCap;
};

// Exact volume of the unconstrained pattern polytope over lambda.
inline Rational pattern_volume(const Partition& lambda) {
  const std::size_t n = lambda.n();
  Rational vol = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      vol *= (lambda.parts[i] - lambda.parts[j]) / Integer(j - i);
  return vol;
}

inline ObjectiveContext make_objective_context(const NormalizedInstance& inst,
                                               long precision_bit_cap = kDefaultPrecisionBitCap) {
  ObjectiveContext ctx;
  ctx.inst = inst;
  ctx.record = compute_conditioning(inst);
  if (!(ctx.record.epsilon.lo > 0))
    throw boundary_error("objective context: epsilon vanishes, the search radius is unbounded");
  ctx.radius = ctx.record.domain_radius.hi;
  ctx.lip = ceil_sqrt_rat(norm_sq(inst.lambda.parts));
  ctx.v0 = log_approx(pattern_volume(inst.lambda), Rational(1, 2)) - Rational(1, 2);
  ctx.c2 = Rational(2 * ctx.lip);
  ctx.c1 = Rational(4 * ctx.lip) * (ctx.radius + 2);
  ctx.precision_bit_cap = precision_bit_cap;
  return ctx;
}

// Exact upper bound on ghat(x-lift) - ghat(0) along the segment from the
// origin: the gradient of log S stays in the permutohedron of lambda, so the
// slope never exceeds max over permutations of (sigma lambda) . x minus
// mu . x, and the maximizing sigma pairs sorted entries (rearrangement).
inline Rational tilt_slope_envelope(const NormalizedInstance& inst, const std::vector<Rational>& x) {
  std::vector<Rational> xs = x;
  std::sort(xs.begin(), xs.end(), std::greater<Rational>());
  return dot(inst.lambda.parts, xs) - dot(inst.mu.w, x);
}

inline CertifiedValue extended_objective(const ObjectiveContext& ctx,
                                         const std::vector<Rational>& y, const Rational& delta) {
  if (y.size() + 1 != ctx.inst.n())
    throw input_error("extended_objective: y must have n-1 coordinates");
  Interval nrm = norm_interval(y);
  Interval linear = Interval(ctx.v0 - ctx.c1) + nrm * ctx.c2;
  std::vector<Rational> x = y;
  x.push_back(Rational(0));
  // Far field: once the linear branch clears the exact slope envelope of
  // ghat, the maximum is the linear branch and no Schur evaluation is run.
  if (linear.lo >= ctx.v0 + 1 + tilt_slope_envelope(ctx.inst, x))
    return CertifiedValue::from_interval(linear);
  CertifiedValue g = ghat(ctx.inst, y, delta, ctx.precision_bit_cap);
  Interval gi = g.to_interval();
  if (linear.hi <= gi.lo) return g;
  return CertifiedValue::from_interval(max_interval(gi, linear));
}

namespace detail {

// One certified evaluation: ghat(y) enclosure plus a subgradient box.
// support = value.lo - sup over the box of G . y, so that for every z
//   ghat(z) >= support + G_mid . z - ||G - G_mid|| ||z||.
struct Cut {
  std::vector<Rational> y;
  Interval value;
  std::vector<Rational> grad_mid;
  std::vector<Rational> grad_rad;
  Rational grad_rad_l1;  // sum of radii, an upper bound on the box l2 radius
  Rational support;
};

inline bool evaluate_cut(const NormalizedInstance& inst, const std::vector<Rational>& y,
                         const Rational& delta_val, const Rational& delta_grad, long cap,
                         Cut& out) {
  const std::size_t m = y.size();
  Cut c;
  c.y = y;
  try {
    CertifiedValue v = ghat(inst, y, delta_val, cap);
    c.value = v.to_interval();
    std::vector<Rational> x = y;
    x.push_back(Rational(0));
    std::vector<CertifiedValue> gx = grad_log_schur(inst.lambda, x, delta_grad, cap);
    c.grad_mid.resize(m);
    c.grad_rad.resize(m);
    c.grad_rad_l1 = 0;
    for (std::size_t j = 0; j < m; ++j) {
      c.grad_mid[j] = gx[j].value - inst.mu.w[j];
      c.grad_rad[j] = gx[j].error;
      c.grad_rad_l1 += gx[j].error;
    }
    c.support = c.value.lo - dot(c.grad_mid, y);
    for (std::size_t j = 0; j < m; ++j) c.support -= c.grad_rad[j] * abs(y[j]);
  } catch (const resource_error&) {
    return false;
  }
  out = std::move(c);
  return true;
}

// Exact lower bound on min ghat over the ball of radius rho from a convex
// combination of cuts: sum w support - rho (||sum w G_mid|| + sum w rad).
inline Rational aggregate_lower_bound(const std::vector<Cut>& cuts,
                                      const std::vector<std::size_t>& idx,
                                      const std::vector<Rational>& w, const Rational& rho) {
  const std::size_t m = cuts[idx[0]].grad_mid.size();
  Rational base = 0, rad_term = 0;
  std::vector<Rational> gsum(m, Rational(0));
  for (std::size_t s = 0; s < idx.size(); ++s) {
    if (w[s] == 0) continue;
    const Cut& c = cuts[idx[s]];
    base += w[s] * c.support;
    rad_term += w[s] * c.grad_rad_l1;
    for (std::size_t j = 0; j < m; ++j) gsum[j] += w[s] * c.grad_mid[j];
  }
  return base - rho * (norm_interval(gsum).hi + rad_term);
}

// Convex weights approximately minimizing ||sum w G_mid|| over the listed
// cuts, by Frank-Wolfe in floating point. Only used to pick weights; the
// bound itself is evaluated exactly.
inline std::vector<Rational> min_norm_weights(const std::vector<Cut>& cuts,
                                              const std::vector<std::size_t>& idx) {
  const std::size_t s_count = idx.size();
  const std::size_t m = cuts[idx[0]].grad_mid.size();
  std::vector<std::vector<double>> g(s_count, std::vector<double>(m));
  for (std::size_t s = 0; s < s_count; ++s)
    for (std::size_t j = 0; j < m; ++j)
      g[s][j] = cuts[idx[s]].grad_mid[j].convert_to<double>();
  std::vector<double> w(s_count, 0.0);
  w[0] = 1.0;
  std::vector<double> p = g[0];
  for (int it = 0; it < 400; ++it) {
    std::size_t jstar = 0;
    double best = 0;
    for (std::size_t s = 0; s < s_count; ++s) {
      double d = 0;
      for (std::size_t j = 0; j < m; ++j) d += g[s][j] * p[j];
      if (s == 0 || d < best) {
        best = d;
        jstar = s;
      }
    }
    double pp = 0, pq = 0, qq = 0;
    for (std::size_t j = 0; j < m; ++j) {
      pp += p[j] * p[j];
      pq += p[j] * g[jstar][j];
      qq += g[jstar][j] * g[jstar][j];
    }
    double denom = pp - 2 * pq + qq;
    if (!(denom > 0)) break;
    double gamma = (pp - pq) / denom;
    if (gamma <= 0) break;
    if (gamma > 1) gamma = 1;
    for (std::size_t s = 0; s < s_count; ++s) w[s] *= 1 - gamma;
    w[jstar] += gamma;
    for (std::size_t j = 0; j < m; ++j) p[j] = (1 - gamma) * p[j] + gamma * g[jstar][j];
  }
  std::vector<Rational> out(s_count, Rational(0));
  Rational total = 0;
  for (std::size_t s = 0; s < s_count; ++s) {
    if (w[s] > 0) {
      out[s] = Rational(w[s]);  // exact dyadic value of the double
      total += out[s];
    }
  }
  if (total == 0) {
    out.assign(s_count, Rational(0));
    out[0] = 1;
    return out;
  }
  for (auto& v : out) v /= total;
  return out;
}

// Best available exact lower bound: the single best cut and the min-norm
// aggregation are both sound, so take the larger.
inline Rational best_lower_bound(const std::vector<Cut>& cuts, std::size_t best,
                                 const Rational& rho) {
  std::vector<std::size_t> idx;
  idx.push_back(best);
  std::vector<Rational> wb{Rational(1)};
  Rational lb = aggregate_lower_bound(cuts, idx, wb, rho);
  if (cuts.size() > 1) {
    // Aggregate over the lowest-value cuts; cap the set so the exact
    // arithmetic stays cheap.
    std::vector<std::size_t> order(cuts.size());
    for (std::size_t s = 0; s < cuts.size(); ++s) order[s] = s;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return cuts[a].value.hi < cuts[b].value.hi;
    });
    if (order.size() > 48) order.resize(48);
    std::vector<Rational> w = min_norm_weights(cuts, order);
    Rational cand = aggregate_lower_bound(cuts, order, w, rho);
    if (cand > lb) lb = cand;
  }
  return lb;
}

inline double rational_to_double(const Rational& x) { return x.convert_to<double>(); }

// Proposals live on the 2^-48 grid: exactly representable in double, fine
// enough that the grid never limits how far the descent can push the
// midpoint gradient norm down.
inline Rational snap_dyadic(double v) {
  if (!std::isfinite(v)) throw certify_error("minimize: non-finite proposal coordinate");
  return round_down_bits(Rational(v), 48);
}

}  // namespace detail

inline OptimizationResult minimize(const ObjectiveContext& ctx, const OptConfig& cfg) {
  const std::size_t n = ctx.inst.n();
  const std::size_t m = n - 1;
  if (!(cfg.eps_opt > 0)) throw input_error("minimize: eps_opt must be positive");
  const Rational eps = cfg.eps_opt;

  std::vector<detail::Cut> cuts;
  std::size_t best = 0;
  long evals = 0;
  int doublings = 0;
  Rational r_cur = ctx.radius;
  Rational rho = r_cur + Rational(3, 2);
  // Keeps the aggregated gradient-radius penalty below eps/16 over the ball.
  auto grad_floor = [&](const Rational& radius_now) {
    return eps / (Rational(32 * Integer(static_cast<long>(m))) * (radius_now + 1));
  };
  Rational dgrad_floor = grad_floor(rho);

  auto try_eval = [&](const std::vector<Rational>& y, const Rational& dv,
                      const Rational& dg) -> bool {
    ++evals;
    detail::Cut c;
    if (!detail::evaluate_cut(ctx.inst, y, dv, dg, ctx.precision_bit_cap, c)) return false;
    cuts.push_back(std::move(c));
    if (cuts.back().value.hi < cuts[best].value.hi) best = cuts.size() - 1;
    return true;
  };

  {
    std::vector<Rational> origin(m, Rational(0));
    Rational d0 = eps / 8;
    Rational dg = d0 < dgrad_floor ? d0 : dgrad_floor;
    if (!try_eval(origin, d0, dg))
      throw resource_error("minimize: certified evaluation failed at the origin");
  }

  // Proposer state, floating point only.
  double alpha;
  {
    double gn = 0;
    for (const auto& gj : cuts[0].grad_mid) {
      double v = detail::rational_to_double(gj);
      gn += v * v;
    }
    gn = std::sqrt(gn);
    alpha = gn > 1e-12 ? 1.0 / gn : 1.0;
  }
  double trust = 8.0;
  std::vector<double> prev_y, prev_g;
  bool have_prev = false;

  Rational lb;
  bool have_lb = false;
  double rho_d = detail::rational_to_double(rho);

  while (true) {
    bool gap_closed = false;
    bool escaped = false;
    for (long t = 1; evals < cfg.max_iterations; ++t) {
      // An incumbent outside the certified interior radius means the ball is
      // too small; enlarge before spending evaluations on the gap.
      if (norm_sq(cuts[best].y) > (r_cur + 1) * (r_cur + 1)) {
        escaped = true;
        break;
      }
      Rational cand = detail::best_lower_bound(cuts, best, rho);
      if (!have_lb || cand > lb) {
        lb = cand;
        have_lb = true;
      }
      if (cuts[best].value.hi - lb <= eps) {
        gap_closed = true;
        break;
      }

      // Descent proposal from the incumbent, clipped to the trust region
      // and to the ball, snapped to the grid.
      std::vector<double> yb(m), gb(m);
      for (std::size_t j = 0; j < m; ++j) {
        yb[j] = detail::rational_to_double(cuts[best].y[j]);
        gb[j] = detail::rational_to_double(cuts[best].grad_mid[j]);
      }
      double gn = 0;
      for (double v : gb) gn += v * v;
      gn = std::sqrt(gn);
      double step = alpha;
      if (gn > 0 && step * gn > trust) step = trust / gn;
      std::vector<Rational> y_next(m);
      bool fresh = false;
      for (int rescale = 0; rescale < 6 && !fresh; ++rescale) {
        std::vector<double> c(m);
        double norm_c = 0;
        for (std::size_t j = 0; j < m; ++j) {
          c[j] = yb[j] - step * gb[j];
          norm_c += c[j] * c[j];
        }
        norm_c = std::sqrt(norm_c);
        if (norm_c > 0.9 * rho_d) {
          double sc = 0.9 * rho_d / norm_c;
          for (auto& v : c) v *= sc;
        }
        for (std::size_t j = 0; j < m; ++j) y_next[j] = detail::snap_dyadic(c[j]);
        fresh = true;
        for (const auto& cut : cuts)
          if (cut.y == y_next) {
            fresh = false;
            break;
          }
        if (!fresh) step *= 0.5;
      }
      if (!fresh) y_next[t % m] += Rational(Integer(1 + (t % 5)), Integer(1) << 48);

      long block = 1;
      while (block < t) block <<= 1;  // smallest power of two >= t
      Rational dval = eps / (8 * Integer(block));
      Rational dgrad = dval < dgrad_floor ? dval : dgrad_floor;
      std::size_t prev_best = best;
      if (!try_eval(y_next, dval, dgrad)) {
        alpha *= 0.25;
        trust = std::max(trust * 0.5, 1e-9);
        continue;
      }
      const detail::Cut& fresh_cut = cuts.back();
      if (best == cuts.size() - 1 && best != prev_best) {
        trust = std::min(trust * 2.0, 1e9);
      } else if (fresh_cut.value.hi >= cuts[prev_best].value.hi) {
        alpha *= 0.25;
        trust = std::max(trust * 0.5, 1e-9);
      }
      // Barzilai-Borwein refresh from the two most recent evaluations.
      std::vector<double> yc(m), gc(m);
      for (std::size_t j = 0; j < m; ++j) {
        yc[j] = detail::rational_to_double(fresh_cut.y[j]);
        gc[j] = detail::rational_to_double(fresh_cut.grad_mid[j]);
      }
      if (have_prev) {
        double ss = 0, sz = 0;
        for (std::size_t j = 0; j < m; ++j) {
          double s = yc[j] - prev_y[j];
          double z = gc[j] - prev_g[j];
          ss += s * s;
          sz += s * z;
        }
        if (sz > 0 && ss > 0) alpha = std::min(std::max(ss / sz, 1e-9), 1e9);
      }
      prev_y = yc;
      prev_g = gc;
      have_prev = true;
    }
    if (escaped) {
      if (doublings >= cfg.max_domain_doublings)
        throw certify_error("minimize: domain doubling limit reached without an interior minimizer");
      ++doublings;
      r_cur *= 2;
      rho = r_cur + Rational(3, 2);
      rho_d = detail::rational_to_double(rho);
      dgrad_floor = grad_floor(rho);
      have_lb = false;  // the bound depends on the ball radius
      continue;
    }
    if (!gap_closed)
      throw resource_error("minimize: evaluation budget exhausted before the gap certificate closed");
    break;  // gap closed with an interior incumbent
  }

  const detail::Cut& incumbent = cuts[best];
  CertifiedValue fin = ghat(ctx.inst, incumbent.y, eps / 8, ctx.precision_bit_cap);
  ++evals;
  Interval fiv = fin.to_interval();
  Rational upper = fiv.hi < incumbent.value.hi ? fiv.hi : incumbent.value.hi;
  if (lb > upper) throw certify_error("minimize: lower bound crossed the incumbent value");

  OptimizationResult out;
  out.y_star = incumbent.y;
  out.g_star = CertifiedValue::from_interval(Interval(lb, upper));
  out.domain_doublings = doublings;
  out.eps_opt = cfg.eps_opt;

  std::vector<Rational> x_star = incumbent.y;
  x_star.push_back(Rational(0));
  std::vector<CertifiedValue> gx =
      grad_log_schur(ctx.inst.lambda, x_star, eps / 8, ctx.precision_bit_cap);
  ++evals;
  Rational lo_sum = 0, hi_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational dlo = gx[i].value - gx[i].error - ctx.inst.mu.w[i];
    Rational dhi = gx[i].value + gx[i].error - ctx.inst.mu.w[i];
    Rational away = 0;
    if (dlo > 0)
      away = dlo;
    else if (dhi < 0)
      away = -dhi;
    lo_sum += away * away;
    Rational big = Rational(abs(dlo)) > Rational(abs(dhi)) ? Rational(abs(dlo)) : Rational(abs(dhi));
    hi_sum += big * big;
  }
  out.stationarity_residual = CertifiedValue::from_interval(
      Interval(sqrt_interval(lo_sum).lo, sqrt_interval(hi_sum).hi));
  out.iterations = evals;
  return out;
}

inline OptimizationResult minimize(const NormalizedInstance& inst, const OptConfig& cfg = OptConfig()) {
  return minimize(make_objective_context(inst, cfg.precision_bit_cap), cfg);
}

inline OptimizationResult minimize(const NormalizedInstance& inst, const Rational& eps_opt) {
  OptConfig cfg;
  cfg.eps_opt = eps_opt;
  return minimize(inst, cfg);
}

// Certifies ghat at radius R+1 along the given ray exceeds ghat(0), without
// a far-field evaluation: convexity makes chord slopes nondecreasing along
// the ray, so a certified positive slope between two desk-scale points
// extends linearly to the target radius.
inline bool coercivity_ray_certificate(const ObjectiveContext& ctx,
                                       const std::vector<Rational>& direction) {
  if (direction.size() + 1 != ctx.inst.n())
    throw input_error("coercivity certificate: direction must have n-1 coordinates");
  Rational nsq = norm_sq(direction);
  if (nsq == 0) throw input_error("coercivity certificate: zero direction");
  Interval dir_norm = sqrt_interval(nsq);
  Rational target = ctx.radius + 1;
  Rational delta(1, 64);
  // Scale the first arm so its length is near one.
  Rational s = Rational(1) / ceil_sqrt_rat(nsq);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Rational t1 = s, t2 = 2 * s;
    // The chord slope certificate needs both arms inside the target radius.
    if (Rational(t2) * dir_norm.hi > target) return false;
    std::vector<Rational> p1(direction), p2(direction);
    for (auto& v : p1) v *= t1;
    for (auto& v : p2) v *= t2;
    try {
      Interval g0 = ghat(ctx.inst, std::vector<Rational>(direction.size(), Rational(0)), delta,
                         ctx.precision_bit_cap)
                        .to_interval();
      Interval g1 = ghat(ctx.inst, p1, delta, ctx.precision_bit_cap).to_interval();
      Interval g2 = ghat(ctx.inst, p2, delta, ctx.precision_bit_cap).to_interval();
      Rational slope_lo = (g2.lo - g1.hi) / (t2 - t1);
      if (slope_lo > 0) {
        // Parameter value reaching the target radius, rounded down.
        Rational t_far = target / dir_norm.hi;
        if (t_far > t2) {
          Rational floor_val = g2.lo + (t_far - t2) * slope_lo;
          if (floor_val > g0.hi) return true;
        }
      }
    } catch (const resource_error&) {
      return false;
    }
    s *= 4;
    delta /= 2;
  }
  return false;
}

}  // namespace kostka

#endif  // KOSTKA_OPTIMIZE_HPP
