// Acceptance harness: one line per criterion, PASS or FAIL, nonzero exit
// status when anything fails. Every check compares the engine against an
// independent oracle, a frozen exact value, or a stated error bound.
// Random draws use fixed seeds so reruns are byte-identical.

#include <bit>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kostka/bounds.hpp"
#include "kostka/certarith.hpp"
#include "kostka/conditioning.hpp"
#include "kostka/domain.hpp"
#include "kostka/optimize.hpp"
#include "kostka/oracle.hpp"
#include "kostka/schur.hpp"

namespace {

using namespace kostka;

Rational R(long v) { return Rational(v); }

Partition P(std::initializer_list<long> v) {
  std::vector<Rational> parts;
  for (long x : v) parts.push_back(R(x));
  return Partition(std::move(parts));
}

Weight W(std::initializer_list<long> v) {
  std::vector<Rational> w;
  for (long x : v) w.push_back(R(x));
  return Weight(std::move(w));
}

// ---------------------------------------------------------------------------
// Reference transcendentals, independent of the library kernels.

// Enclosure of log x from the inverse hyperbolic tangent series with an
// exact geometric tail: x = 2^m y with y in [1,2), so the series argument
// (y-1)/(y+1) never exceeds 1/3 and 48 terms leave a tail below 1e-45.
Interval log_oracle(const Rational& x, int terms = 48) {
  if (!(x > 0)) throw input_error("log_oracle: positive argument required");
  long m = 0;
  Rational y = x;
  while (y >= 2) {
    y /= 2;
    ++m;
  }
  while (y < 1) {
    y *= 2;
    --m;
  }
  auto atanh_enc = [terms](const Rational& z) {
    Rational sum = 0, p = z;
    const Rational z2 = z * z;
    for (int k = 0; k < terms; ++k) {
      sum += p / (2 * k + 1);
      p *= z2;
    }
    Rational tail = p / ((2 * terms + 1) * (1 - z2));
    return Interval(sum, sum + tail);
  };
  Interval log2 = atanh_enc(Rational(1, 3)) * Rational(2);
  Interval logy = atanh_enc(Rational((y - 1) / (y + 1))) * Rational(2);
  return logy + log2 * Rational(m);
}

// Enclosure of exp(-x) for x >= 0 from the plain series plus the Lagrange
// remainder with a geometric majorant.
Interval exp_neg_oracle(const Rational& x) {
  if (x < 0) throw input_error("exp_neg_oracle: nonnegative argument required");
  long L = std::max<long>(140, 4 * static_cast<long>(ceil_int(x)) + 60);
  Rational S = exp_series(x, L);
  Rational t = pow_rat(x, L + 1) / Rational(factorial(static_cast<unsigned>(L + 1)));
  Rational tail = x == 0 ? Rational(0) : Rational(t / (1 - x / (L + 2)));
  return Interval(1 / (S + tail), 1 / S);
}

bool overlaps(const Interval& a, const Interval& b) { return a.lo <= b.hi && b.lo <= a.hi; }

// ---------------------------------------------------------------------------
// Shared pipeline plumbing.

struct PipelineRun {
  NormalizedInstance ni;
  OptimizationResult opt;
  VolumeBracket bracket;
  double seconds = 0;
};

PipelineRun run_pipeline(const Instance& inst, const Rational& eps_opt) {
  auto t0 = std::chrono::steady_clock::now();
  PipelineRun run;
  run.ni = normalize(inst);
  ObjectiveContext ctx = make_objective_context(run.ni);
  OptConfig cfg;
  cfg.eps_opt = eps_opt;
  run.opt = minimize(ctx, cfg);
  run.bracket = assemble_bracket(run.ni, ctx.record, run.opt);
  run.seconds =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
          .count() /
      1000.0;
  return run;
}

std::vector<Instance> load_published_instances() {
  std::ifstream f(std::string(ACCEPTANCE_DATA_DIR) + "/acceptance_instances.json");
  if (!f) throw input_error("acceptance instance list not found");
  nlohmann::json j = nlohmann::json::parse(f);
  std::vector<Instance> out;
  for (const auto& e : j) {
    std::vector<Rational> l, m;
    for (const auto& v : e.at("lambda")) l.push_back(R(v.get<long>()));
    for (const auto& v : e.at("mu")) m.push_back(R(v.get<long>()));
    out.emplace_back(Partition(std::move(l)), Weight(std::move(m)));
  }
  return out;
}

// Results of the published-suite runs, shared between the containment
// criterion and the ratio-envelope criterion.
std::vector<PipelineRun> g_suite;

// ---------------------------------------------------------------------------
// Criterion bodies. Each returns pass/fail plus a short summary.

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome ok(std::string d) { return {true, std::move(d)}; }
Outcome bad(std::string d) { return {false, std::move(d)}; }

// 1. Certified bracket contains the oracle-exact volume on every published
// instance, each within the per-instance time budget.
Outcome criterion_bracket_containment() {
  std::vector<Instance> instances = load_published_instances();
  if (instances.size() < 25)
    return bad("published list has only " + std::to_string(instances.size()) + " instances");
  double worst_seconds = 0;
  for (const Instance& inst : instances) {
    PipelineRun run = run_pipeline(inst, Rational(1, 1000));
    ExactKostkaVolume vo = exact_kostka_volume(inst);
    worst_seconds = std::max(worst_seconds, run.seconds);
    if (!run.bracket.upper_finite)
      return bad("instance produced an infinite upper bound");
    if (!(run.bracket.lower <= vo.v.lo && vo.v.hi <= run.bracket.upper)) {
      std::ostringstream os;
      os << "containment failed on lambda_1=" << inst.lambda.parts[0].str()
         << " n=" << inst.n();
      return bad(os.str());
    }
    if (run.seconds >= 60.0) return bad("instance exceeded the 60 s budget");
    g_suite.push_back(std::move(run));
  }
  std::ostringstream os;
  os << instances.size() << " instances contained, slowest " << std::fixed
     << std::setprecision(1) << worst_seconds << " s";
  return ok(os.str());
}

// 2. The fully worked small instance: every derived quantity matches its
// frozen exact value.
Outcome criterion_canonical_instance() {
  Instance inst{P({2, 1, 0}), W({1, 1, 1})};
  if (kostka_count(inst.lambda, inst.mu) != 2) return bad("lattice count is not 2");
  ExactKostkaVolume vo = exact_kostka_volume(inst);
  if (vo.vtilde != 1) return bad("projected volume is not 1");
  if (!(vo.v.lo * vo.v.lo <= 2 && vo.v.hi * vo.v.hi >= 2))
    return bad("volume interval does not bracket sqrt(2)");

  NormalizedInstance ni = normalize(inst);
  ObjectiveContext ctx = make_objective_context(ni);
  if (!(ctx.record.epsilon.lo >= Rational(1, 864)))
    return bad("interiority margin below the guaranteed floor 1/864");

  PshVolume psh = psh_volume(ni.lambda);
  if (!psh.exact || psh.value != 3) return bad("projected permutohedron volume is not 3");

  const Rational eps_opt(1, 1000);
  OptConfig cfg;
  cfg.eps_opt = eps_opt;
  OptimizationResult opt = minimize(ctx, cfg);
  Interval g = opt.g_star.to_interval();
  if (!(g.lo >= -eps_opt && g.hi <= eps_opt))
    return bad("objective minimum is not 0 within the tolerance");

  VolumeBracket br = assemble_bracket(ni, ctx.record, opt);
  if (!(br.lower * br.lower <= 2 && br.upper * br.upper >= 2))
    return bad("bracket does not contain sqrt(2)");
  return ok("count 2, volume sqrt(2), margin 1/144, hull volume 3, bracket contains sqrt(2)");
}

// 3. Evaluation at the origin agrees with the exact closed-form volume
// prod (lambda_i - lambda_j)/(j - i), through an independent log oracle.
Outcome criterion_origin_evaluation() {
  const std::vector<Partition> lambdas = {
      P({2, 1, 0}),          P({3, 1, 0}),          P({4, 2, 1}),
      P({5, 3, 1}),          P({3, 2, 1, 0}),       P({5, 3, 2, 1}),
      P({6, 4, 2, 0}),       P({4, 3, 2, 1, 0}),    P({6, 4, 3, 2, 1}),
      P({8, 6, 4, 2, 0}),
  };
  const Rational delta(1, 1000000);
  for (const Partition& lambda : lambdas) {
    const std::size_t n = lambda.n();
    Rational prod = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        prod *= (lambda.parts[i] - lambda.parts[j]) / Integer(j - i);
    Interval truth = log_oracle(prod);
    Interval got = log_schur(lambda, std::vector<Rational>(n, Rational(0)), delta).to_interval();
    if (!(got.lo <= truth.lo && truth.hi <= got.hi))
      return bad("origin value escaped the certified interval at n=" + std::to_string(n));
  }
  return ok("10 spectra across n=3..5, all certified intervals contain the exact value");
}

// 4. Certified gradient versus central finite differences, plus the
// majorization geometry of the gradient box.
Outcome criterion_gradient_checks() {
  std::mt19937 rng(4001);
  const Rational h(1, 100000);
  const Rational delta(1, Integer(1000000) * Integer(1000000));  // 1e-12 evaluations
  const Rational rel(1, 1000000);

  auto rand_coord = [&rng]() {
    std::uniform_int_distribution<int> d(-32, 32);
    return Rational(d(rng), 16);
  };

  const Partition lam3 = P({3, 2, 1});
  const Partition lam4 = P({4, 2, 1, 0});
  for (int t = 0; t < 20; ++t) {
    const Partition& lambda = t < 12 ? lam3 : lam4;
    const std::size_t n = lambda.n();
    std::vector<Rational> x(n);
    for (auto& c : x) c = rand_coord();

    std::vector<CertifiedValue> grad = grad_log_schur(lambda, x, rel);
    Rational rad_sum = 0;
    Rational mid_sum = 0;
    for (const auto& g : grad) {
      rad_sum += g.to_interval().rad();
      mid_sum += g.value;
    }

    // Coordinate sum equals the total weight within certification.
    Rational total_gap = mid_sum - lambda.total();
    if (total_gap < 0) total_gap = -total_gap;
    if (!(total_gap <= rad_sum)) return bad("gradient coordinates do not sum to the weight");

    // Sorted prefix sums stay below the spectrum's, up to the box radii.
    std::vector<Rational> mids;
    for (const auto& g : grad) mids.push_back(g.value);
    std::sort(mids.begin(), mids.end(), std::greater<Rational>());
    Rational prefix_g = 0, prefix_l = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      prefix_g += mids[k];
      prefix_l += lambda.parts[k];
      if (!(prefix_g <= prefix_l + rad_sum))
        return bad("gradient box does not intersect the permutohedron");
    }

    // Central differences on each coordinate.
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      CertifiedValue fp = log_schur(lambda, xp, delta);
      CertifiedValue fm = log_schur(lambda, xm, delta);
      Rational fd = (fp.value - fm.value) / (2 * h);
      Rational diff = fd - grad[i].value;
      if (diff < 0) diff = -diff;
      Rational mag = grad[i].value < 0 ? -grad[i].value : grad[i].value;
      if (mag < 1) mag = 1;
      Rational tol = rel * mag + grad[i].to_interval().rad() +
                     (fp.to_interval().rad() + fm.to_interval().rad()) / (2 * h);
      if (!(diff <= tol)) {
        std::ostringstream os;
        os << "finite difference deviates at point " << t << " coordinate " << i;
        return bad(os.str());
      }
    }
  }
  return ok("20 points, all coordinates within 1e-6 plus certification radii");
}

// 5. On the centered instance the minimizer must sit at the origin.
Outcome criterion_stationarity() {
  Instance inst{P({3, 2, 1}), W({2, 2, 2})};
  NormalizedInstance ni = normalize(inst);
  ObjectiveContext ctx = make_objective_context(ni);
  OptConfig cfg;
  cfg.eps_opt = Rational(1, 10000);
  OptimizationResult opt = minimize(ctx, cfg);

  Rational norm_sq = 0;
  for (const Rational& c : opt.y_star) norm_sq += c * c;
  if (!(norm_sq <= Rational(1, 10000))) return bad("minimizer strays from the origin");
  if (!(opt.stationarity_residual.to_interval().hi <= Rational(1, 100)))
    return bad("stationarity residual exceeds 1e-2");
  return ok("||y*|| <= 1e-2 and residual <= 1e-2 at tolerance 1e-4");
}

// 6. Scaled lattice-point densities approach the exact projected volume.
Outcome criterion_scaling() {
  const std::vector<Instance> instances = {
      {P({2, 1, 0}), W({1, 1, 1})},     {P({3, 1, 0}), W({2, 1, 1})},
      {P({3, 2, 1}), W({2, 2, 2})},     {P({4, 2, 0}), W({2, 2, 2})},
      {P({3, 2, 1, 0}), W({2, 2, 1, 1})},
  };
  for (const Instance& inst : instances) {
    Rational vt = exact_kostka_volume(inst).vtilde;
    Rational prev_err;
    bool first = true;
    Rational last_err;
    for (unsigned long N : {8ul, 16ul, 32ul, 64ul}) {
      Rational err = scaling_limit(inst, N) - vt;
      if (err < 0) err = -err;
      if (!first && !(err < prev_err)) return bad("density error failed to decrease");
      prev_err = err;
      last_err = err;
      first = false;
    }
    if (!(last_err * 10 <= vt)) return bad("density at N=64 misses the volume by over 10%");
  }
  return ok("5 instances, errors decrease over N=8..64 and end within 10%");
}

// 7. Conditioning quantities against bisection and subset-enumeration
// oracles, plus their guaranteed floors.
Outcome criterion_conditioning_oracles() {
  std::mt19937 rng(7001);
  const Rational tol = Rational(1, Integer(1) << 40);

  // Margin of mu by bisection on the membership test: the largest delta
  // such that mu still lies in the permutohedron shrunk toward its center
  // by the factor 1 - delta. The feasible set of delta is [0, tau].
  auto bisect_tau = [](const Partition& lambda, const Weight& mu) {
    const std::size_t n = lambda.n();
    Rational mean = lambda.total() / Integer(n);
    auto inside = [&](const Rational& d) {
      std::vector<Rational> shrunk(n);
      for (std::size_t i = 0; i < n; ++i)
        shrunk[i] = mean + (1 - d) * (lambda.parts[i] - mean);
      return majorizes(Partition(std::move(shrunk)), mu);
    };
    Rational lo = 0, hi = 1;
    if (inside(hi)) return Interval(Rational(1), Rational(1));
    for (int it = 0; it < 45; ++it) {
      Rational mid = (lo + hi) / 2;
      (inside(mid) ? lo : hi) = mid;
    }
    return Interval(lo, hi);
  };

  // Distance from the center to the nearest subset facet, every proper
  // subset enumerated. All subsets of one size share a right-hand side,
  // so this independently re-derives the per-size reduction.
  auto subset_r0 = [](const Partition& lambda) {
    const std::size_t n = lambda.n();
    Rational mean = lambda.total() / Integer(n);
    auto pl = prefix_sums_desc(lambda.parts);
    bool first = true;
    Rational best_sq;
    for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << n); ++mask) {
      std::size_t k = static_cast<std::size_t>(std::popcount(mask));
      Rational slack = pl[k - 1] - mean * Integer(k);
      Rational dist_sq = slack * slack * Integer(n) / (Integer(k) * Integer(n - k));
      if (first || dist_sq < best_sq) best_sq = dist_sq;
      first = false;
    }
    return sqrt_interval(best_sq, 96);
  };

  auto random_lambda = [&rng](std::size_t n, bool halves) {
    std::uniform_int_distribution<int> gap(1, 3);
    std::uniform_int_distribution<int> low(0, 2);
    std::vector<Rational> parts(n);
    parts[n - 1] = R(low(rng));
    for (std::size_t i = n - 1; i > 0; --i) parts[i - 1] = parts[i] + gap(rng);
    if (halves)
      for (auto& p : parts) p /= 2;
    return Partition(std::move(parts));
  };

  auto random_interior_mu = [&rng](const Partition& lambda) {
    const std::size_t n = lambda.n();
    Rational total = lambda.total();
    if (lambda.is_integral()) {
      long cap = static_cast<long>(lambda.parts[0].convert_to<double>());
      std::uniform_int_distribution<long> entry(0, cap);
      for (int attempt = 0; attempt < 500; ++attempt) {
        std::vector<Rational> w(n);
        Rational sum = 0;
        for (auto& e : w) {
          e = R(entry(rng));
          sum += e;
        }
        if (sum != total) continue;
        Weight mu(std::move(w));
        if (strictly_inside(lambda, mu)) return mu;
      }
    }
    // Fallback (and the rational case): blend the center with a vertex.
    std::vector<Rational> v = lambda.parts;
    std::shuffle(v.begin(), v.end(), rng);
    std::uniform_int_distribution<int> num(1, 4);
    Rational theta(num(rng), 8);
    Rational mean = total / Integer(n);
    std::vector<Rational> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = mean + theta * (v[i] - mean);
    return Weight(std::move(w));
  };

  int floor_checks = 0;
  for (int t = 0; t < 50; ++t) {
    std::size_t n = 3 + static_cast<std::size_t>(t % 3);
    Partition lambda = random_lambda(n, t % 7 == 6);
    Weight mu = random_interior_mu(lambda);

    Rational tau = compute_tau(lambda, mu);
    Interval seen = bisect_tau(lambda, mu);
    if (!(tau >= seen.lo - tol && tau <= seen.hi + tol))
      return bad("dilation margin disagrees with bisection at trial " + std::to_string(t));

    Interval r0 = compute_r0(lambda);
    Interval ref = subset_r0(lambda);
    if (!overlaps(r0, ref)) return bad("center inradius disagrees with subset enumeration");

    // Floor: r0 >= gap * sqrt(n-1) / 2.
    Rational gap = lambda.min_gap();
    if (!(r0.lo >= gap * sqrt_interval(Rational(Integer(n - 1)), 96).hi / 2))
      return bad("center inradius floor violated");

    // Floor: tau >= d_mu / (lambda_1 sqrt(n)).
    Interval d_mu = compute_d_mu(lambda, mu);
    if (!(tau * lambda.parts[0] * sqrt_interval(Rational(Integer(n)), 96).lo >= d_mu.hi))
      return bad("dilation margin floor violated");

    // Floor for integral interior instances: eps >= 1/(16 lambda_1 n^3).
    bool integral_mu = std::all_of(mu.w.begin(), mu.w.end(),
                                   [](const Rational& x) { return is_integer(x); });
    if (lambda.is_integral() && integral_mu && strictly_inside(lambda, mu)) {
      Interval eps = compute_epsilon(lambda, mu);
      Rational floor = Rational(1) / (16 * lambda.parts[0] *
                                      Integer(n) * Integer(n) * Integer(n));
      if (!(eps.lo >= floor)) return bad("interiority margin floor violated");
      ++floor_checks;
    }
  }

  // The subset oracle is feasible through n=6; pin one such spectrum.
  Partition big = P({9, 7, 5, 4, 2, 0});
  if (!overlaps(compute_r0(big), subset_r0(big)))
    return bad("center inradius disagrees with subset enumeration at n=6");

  std::ostringstream os;
  os << "50 trials to 2^-40, n=6 inradius cross-checked, " << floor_checks
     << " integral floor checks";
  return ok(os.str());
}

// 8. Scalar kernels against high-order series oracles with exact tails.
Outcome criterion_kernel_bounds() {
  std::mt19937 rng(8001);

  // exp(-x): relative error within delta on x in [0, 50].
  {
    const Rational delta(1, 100000000);
    std::uniform_int_distribution<int> num(0, 1600);
    for (int t = 0; t < 100; ++t) {
      Rational x(num(rng), 32);
      Rational got = exp_neg_approx(x, delta);
      Interval truth = exp_neg_oracle(x);
      if (!(got >= (1 - delta) * truth.hi && got <= (1 + delta) * truth.lo))
        return bad("exponential kernel breaks its relative bound");
    }
  }

  // log x: additive error within delta on x in (1e-3, 1e3).
  {
    const Rational delta(1, 1000000000);
    std::uniform_int_distribution<long> num(1, 1000000);
    for (int t = 0; t < 100; ++t) {
      Rational x(num(rng), 1000);
      Rational got = log_approx(x, delta);
      Interval truth = log_oracle(x);
      if (!(got <= truth.lo + delta && got >= truth.hi - delta))
        return bad("logarithm kernel breaks its additive bound");
    }
  }

  // Certified determinants of perturbed matrices contain the exact value.
  {
    const Rational e(1, 1000000000);
    std::uniform_int_distribution<int> num(-64, 64);
    std::uniform_int_distribution<int> wiggle(-100, 100);
    int built = 0;
    while (built < 100) {
      std::size_t dim = built < 50 ? 3 : 4;
      RationalMatrix truth(dim);
      Rational tau = 0;
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
          truth.at(i, j) = Rational(num(rng), 32);
          Rational mag = truth.at(i, j) < 0 ? -truth.at(i, j) : truth.at(i, j);
          tau = std::max(tau, mag);
        }
      Rational d = det_exact(truth);
      if (d <= Rational(1, 50)) continue;  // resample until comfortably positive
      RationalMatrix approx(dim);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          approx.at(i, j) = truth.at(i, j) * (1 + Rational(wiggle(rng), 200) * e);
      CertifiedValue cd = det_certified(approx, e, tau + 1, d / 2);
      if (!cd.to_interval().contains(d))
        return bad("certified determinant misses the exact value");
      ++built;
    }
  }
  return ok("100 exponential, 100 logarithm, 100 determinant trials within bounds");
}

// 9. Exact midpoint log-concavity of the volume along random segments.
Outcome criterion_logconcavity() {
  std::mt19937 rng(9001);
  std::uniform_int_distribution<int> num(1, 4);

  auto random_interior = [&](const Partition& lambda) {
    std::vector<Rational> v = lambda.parts;
    std::shuffle(v.begin(), v.end(), rng);
    Rational mean = lambda.total() / Integer(lambda.n());
    Rational theta(num(rng), 8);
    std::vector<Rational> w(lambda.n());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = mean + theta * (v[i] - mean);
    return Weight(std::move(w));
  };

  const Partition lam3 = P({4, 2, 0});
  const Partition lam4 = P({3, 2, 1, 0});
  for (int t = 0; t < 20; ++t) {
    const Partition& lambda = t < 10 ? lam3 : lam4;
    Weight a = random_interior(lambda);
    Weight b = random_interior(lambda);
    std::vector<Rational> mid(lambda.n());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = (a.w[i] + b.w[i]) / 2;
    Rational va = exact_kostka_volume({lambda, a}).vtilde;
    Rational vb = exact_kostka_volume({lambda, b}).vtilde;
    Rational vm = exact_kostka_volume({lambda, Weight(std::move(mid))}).vtilde;
    if (!(vm * vm >= va * vb)) return bad("midpoint inequality fails at trial " + std::to_string(t));
  }
  return ok("20 random segments, midpoint inequality holds exactly");
}

// 10. Translation, scaling, and permutation identities of the evaluator,
// plus the dominance-order monotonicity check.
Outcome criterion_identities() {
  std::mt19937 rng(10001);
  const Rational delta(1, 100000000);
  std::uniform_int_distribution<int> coord(-16, 16);
  std::uniform_int_distribution<int> shift(-4, 4);
  std::uniform_int_distribution<int> beta_pick(2, 3);

  const Partition lam3 = P({3, 2, 1});
  const Partition lam4 = P({4, 2, 1, 0});
  for (int t = 0; t < 20; ++t) {
    const Partition& lambda = t % 2 == 0 ? lam3 : lam4;
    const std::size_t n = lambda.n();
    std::vector<Rational> x(n);
    for (auto& c : x) c = Rational(coord(rng), 8);

    Interval base = log_schur(lambda, x, delta).to_interval();

    // Translation: adding t to every coordinate adds t * |lambda|.
    Rational s(shift(rng), 4);
    std::vector<Rational> xs = x;
    for (auto& c : xs) c += s;
    Interval shifted = log_schur(lambda, xs, delta).to_interval();
    if (!overlaps(shifted, base + Interval(Rational(s * lambda.total()))))
      return bad("translation identity fails");

    // Scaling: dilating the spectrum by an integer beta multiplies the
    // body by beta in each of the n(n-1)/2 free coordinates.
    long beta = beta_pick(rng);
    std::vector<Rational> lb, xb;
    for (const auto& p : lambda.parts) lb.push_back(p * beta);
    for (const auto& c : x) xb.push_back(c * beta);
    Interval left = log_schur(Partition(std::move(lb)), x, delta).to_interval();
    Interval right = log_schur(lambda, xb, delta).to_interval() +
                     log_oracle(R(beta)) * Rational(Integer(n * (n - 1) / 2));
    if (!overlaps(left, right)) return bad("scaling identity fails");

    // Permutation symmetry of the evaluation point.
    std::vector<Rational> xp = x;
    std::shuffle(xp.begin(), xp.end(), rng);
    if (!overlaps(log_schur(lambda, xp, delta).to_interval(), base))
      return bad("permutation symmetry fails");
  }

  struct Triple {
    Partition hi;
    Partition lo;
    std::vector<Rational> x;
  };
  auto X = [](std::initializer_list<Rational> v) { return std::vector<Rational>(v); };
  const Rational half(1, 2), quarter(1, 4), third(1, 3);
  std::vector<Triple> triples;
  triples.push_back({P({5, 3, 1}), P({4, 3, 2}), X({half, R(0), -half})});
  triples.push_back({P({6, 3, 0}), P({5, 3, 1}), X({R(0), R(0), R(0)})});
  triples.push_back({P({6, 4, 2}), P({5, 4, 3}), X({R(1), half, R(0)})});
  triples.push_back({P({7, 4, 1}), P({5, 4, 3}), X({R(-1), R(0), R(1)})});
  triples.push_back({P({7, 4, 1}), P({6, 4, 2}), X({R(0), R(0), R(0)})});
  triples.push_back({P({8, 4, 0}), P({7, 4, 1}), X({third, -third, 2 * third})});
  triples.push_back({P({6, 4, 2, 0}), P({5, 4, 2, 1}), X({R(0), R(0), R(0), R(0)})});
  triples.push_back({P({7, 5, 3, 1}), P({6, 5, 3, 2}), X({half, quarter, R(0), -quarter})});
  triples.push_back({P({8, 5, 2, 0}), P({7, 5, 3, 0}), X({R(1), R(0), R(-1), R(-2)})});
  triples.push_back({P({9, 6, 3, 0}), P({8, 6, 3, 1}), X({half, R(0), R(0), -half})});
  for (std::size_t i = 0; i < triples.size(); ++i)
    if (!schur_monotonicity_check(triples[i].hi, triples[i].lo, triples[i].x))
      return bad("monotonicity check fails on triple " + std::to_string(i));

  return ok("20 identity points and 10 dominance triples verified");
}

// 11. The certified approximation ratio stays under the growth envelope
// n (5.5 log n + 2 log lambda_1 + 12) on the published suite.
Outcome criterion_ratio_envelope() {
  if (g_suite.empty()) return bad("published suite unavailable (containment run failed)");
  Rational worst_margin;
  bool first = true;
  for (const PipelineRun& run : g_suite) {
    const Rational nn = Rational(Integer(run.ni.n()));
    Rational ln_n = log_oracle(nn).lo;
    Rational ln_l1 = log_oracle(run.ni.lambda.parts[0]).lo;
    Rational envelope = nn * (Rational(11, 2) * ln_n + 2 * ln_l1 + 12);
    Rational margin = envelope - run.bracket.approximation_ratio_log.hi;
    if (margin < 0) return bad("ratio exceeds the envelope");
    if (first || margin < worst_margin) worst_margin = margin;
    first = false;
  }
  std::ostringstream os;
  os << g_suite.size() << " instances under the envelope, min slack "
     << std::fixed << std::setprecision(2) << worst_margin.convert_to<double>();
  return ok(os.str());
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria = {
      {"bracket contains the exact volume on the published suite", criterion_bracket_containment},
      {"canonical instance reproduces every frozen value", criterion_canonical_instance},
      {"origin evaluation matches the exact pattern volume", criterion_origin_evaluation},
      {"certified gradient agrees with finite differences", criterion_gradient_checks},
      {"centered instance is stationary at the origin", criterion_stationarity},
      {"lattice densities converge to the exact volume", criterion_scaling},
      {"conditioning matches bisection and subset oracles", criterion_conditioning_oracles},
      {"scalar kernels meet their stated error bounds", criterion_kernel_bounds},
      {"volume is log-concave along random segments", criterion_logconcavity},
      {"evaluator identities and monotonicity hold", criterion_identities},
      {"approximation ratio stays under the growth envelope", criterion_ratio_envelope},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      r = criteria[i].body();
    } catch (const std::exception& e) {
      r = bad(std::string("exception: ") + e.what());
    }
    if (!r.pass) ++failures;
    std::cout << "criterion " << std::setw(2) << i + 1 << ": " << (r.pass ? "PASS" : "FAIL")
              << "  " << criteria[i].label << " (" << r.detail << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
