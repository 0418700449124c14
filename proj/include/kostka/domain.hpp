#pragma once

// Problem domain types: partitions (weakly decreasing rational tuples),
// weights, instance normalization, and the projected lattice-pattern
// polytope in its inequality form.

#include "kostka/rational.hpp"

#include <algorithm>
#include <string>

namespace kostka {

struct Partition {
  std::vector<Rational> parts;

  Partition() = default;
  explicit Partition(std::vector<Rational> p) : parts(std::move(p)) { validate(); }

  std::size_t n() const { return parts.size(); }

  void validate() const {
    if (parts.size() < 2) throw input_error("partition needs at least 2 parts");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i)
      if (parts[i] < parts[i + 1]) throw input_error("partition parts must be non-increasing");
  }

  Rational total() const {
    Rational s = 0;
    for (const auto& p : parts) s += p;
    return s;
  }

  // Smallest gap between consecutive parts; zero iff some parts repeat.
  Rational min_gap() const {
    Rational g = parts[0] - parts[1];
    for (std::size_t i = 1; i + 1 < parts.size(); ++i)
      g = std::min(g, Rational(parts[i] - parts[i + 1]));
    return g;
  }

  bool is_integral() const {
    return std::all_of(parts.begin(), parts.end(),
                       [](const Rational& p) { return is_integer(p); });
  }
};

struct Weight {
  std::vector<Rational> w;

  Weight() = default;
  explicit Weight(std::vector<Rational> v) : w(std::move(v)) {
    if (w.size() < 2) throw input_error("weight needs at least 2 entries");
  }

  std::size_t n() const { return w.size(); }

  Rational total() const {
    Rational s = 0;
    for (const auto& x : w) s += x;
    return s;
  }

  std::vector<Rational> sorted_desc() const {
    std::vector<Rational> s = w;
    std::sort(s.begin(), s.end(), std::greater<Rational>());
    return s;
  }
};

// Sum of the k largest entries, k = 1..n.
inline std::vector<Rational> prefix_sums_desc(const std::vector<Rational>& sorted_desc) {
  std::vector<Rational> p(sorted_desc.size());
  Rational acc = 0;
  for (std::size_t k = 0; k < sorted_desc.size(); ++k) {
    acc += sorted_desc[k];
    p[k] = acc;
  }
  return p;
}

// mu lies in the permutohedron of lambda: every top-k sum of mu is at
// most that of lambda, with equal totals.
inline bool majorizes(const Partition& lambda, const Weight& mu) {
  if (lambda.n() != mu.n()) return false;
  auto pl = prefix_sums_desc(lambda.parts);
  auto pm = prefix_sums_desc(mu.sorted_desc());
  for (std::size_t k = 0; k + 1 < pl.size(); ++k)
    if (pm[k] > pl[k]) return false;
  return pl.back() == pm.back();
}

// Strict version: mu in the relative interior of the permutohedron.
inline bool strictly_inside(const Partition& lambda, const Weight& mu) {
  if (lambda.n() != mu.n()) return false;
  auto pl = prefix_sums_desc(lambda.parts);
  auto pm = prefix_sums_desc(mu.sorted_desc());
  for (std::size_t k = 0; k + 1 < pl.size(); ++k)
    if (pm[k] >= pl[k]) return false;
  return pl.back() == pm.back();
}

// Raw problem input.
struct Instance {
  Partition lambda;
  Weight mu;

  Instance(Partition l, Weight m) : lambda(std::move(l)), mu(std::move(m)) {
    if (lambda.n() != mu.n()) throw input_error("lambda and mu sizes differ");
    if (lambda.total() != mu.total()) throw input_error("lambda and mu totals differ");
    if (!majorizes(lambda, mu))
      throw input_error("mu is not majorized by lambda; the polytope is empty");
  }

  std::size_t n() const { return lambda.n(); }
};

// Instance rescaled and shifted so all gaps are >= 1 and the smallest
// part is >= 1. Volumes transform by beta^-dim where dim is the
// dimension of the projected polytope; shifts leave volumes unchanged.
struct NormalizedInstance {
  Partition lambda;
  Weight mu;
  Integer beta = 1;   // scale applied first
  Rational alpha = 0; // shift applied second

  std::size_t n() const { return lambda.n(); }

  long dim() const {
    long m = static_cast<long>(n());
    return (m - 1) * (m - 2) / 2;
  }

  // Multiplier taking the normalized volume back to the input instance.
  Rational volume_factor() const { return pow_rat(Rational(beta), -dim()); }
};

inline NormalizedInstance normalize(const Instance& inst) {
  const Rational gap = inst.lambda.min_gap();
  if (gap <= 0)
    throw degenerate_error("lambda has repeated parts; the polytope is lower-dimensional");
  Integer beta = gap >= 1 ? Integer(1) : ceil_int(1 / gap);
  Rational lam_min = inst.lambda.parts.back() * beta;
  Rational alpha = lam_min >= 1 ? Rational(0) : 1 - lam_min;
  NormalizedInstance out;
  out.beta = beta;
  out.alpha = alpha;
  std::vector<Rational> l, m;
  l.reserve(inst.n());
  m.reserve(inst.n());
  for (const auto& p : inst.lambda.parts) l.push_back(p * beta + alpha);
  for (const auto& x : inst.mu.w) m.push_back(x * beta + alpha);
  out.lambda = Partition(std::move(l));
  out.mu = Weight(std::move(m));
  return out;
}

// One inequality a.x <= b, tagged with the constraint family it came from.
struct HalfspaceRow {
  std::vector<Rational> a;
  Rational b;
  std::string label;
};

struct HalfspacePolytope {
  std::size_t dim = 0;
  std::vector<HalfspaceRow> rows;
};

// Index of the free pattern variable x_{i,j} (rows i = 2..n-1 keep
// entries j = 1..i-1; diagonal entries are eliminated by the row-sum
// equalities, the top row is pinned to lambda).
inline std::size_t pattern_var_index(std::size_t i, std::size_t j) {
  return (i - 2) * (i - 1) / 2 + (j - 1);
}

// Inequality description of the projected pattern polytope for (lambda,
// mu): the polytope of patterns with top row lambda and row sums given
// by prefix sums of mu, after eliminating the forced coordinates.
// Families:
//   last_row_sum:   bounds on the sum of the free entries of row n-1,
//                   from the eliminated diagonal entry of that row;
//   top_interlace:  row n-1 entries interlace lambda;
//   inner_interlace: interlacing between free entries of rows i, i+1;
//   diag_step:      eliminated diagonals decrease along the rows;
//   diag_prefix:    row i's eliminated diagonal stays below its left
//                   neighbor in row i+1.
inline HalfspacePolytope build_ptilde(const Partition& lambda, const Weight& mu) {
  const std::size_t n = lambda.n();
  if (mu.n() != n) throw input_error("build_ptilde: size mismatch");
  if (lambda.min_gap() < 0) throw input_error("build_ptilde: invalid partition");
  HalfspacePolytope P;
  P.dim = (n - 1) * (n - 2) / 2;
  auto zero = [&] { return std::vector<Rational>(P.dim, Rational(0)); };
  std::vector<Rational> mu_prefix(n);
  {
    Rational acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += mu.w[k];
      mu_prefix[k] = acc;
    }
  }

  // Sum of row n-1 free entries, boxed between mu-prefix minus the two
  // deepest parts of lambda.
  {
    std::vector<Rational> up = zero(), dn = zero();
    for (std::size_t j = 1; j <= n - 2; ++j) {
      up[pattern_var_index(n - 1, j)] = 1;
      dn[pattern_var_index(n - 1, j)] = -1;
    }
    P.rows.push_back({up, mu_prefix[n - 2] - lambda.parts[n - 1], "last_row_sum_hi"});
    P.rows.push_back({dn, -(mu_prefix[n - 2] - lambda.parts[n - 2]), "last_row_sum_lo"});
  }

  // lambda_{j+1} <= x_{n-1,j} <= lambda_j.
  for (std::size_t j = 1; j <= n - 2; ++j) {
    std::vector<Rational> up = zero(), dn = zero();
    up[pattern_var_index(n - 1, j)] = 1;
    dn[pattern_var_index(n - 1, j)] = -1;
    P.rows.push_back({up, lambda.parts[j - 1], "top_interlace_hi"});
    P.rows.push_back({dn, -lambda.parts[j], "top_interlace_lo"});
  }

  // x_{i+1,j} >= x_{i,j} >= x_{i+1,j+1} for inner rows 2 <= i <= n-2.
  for (std::size_t i = 2; i <= n - 2; ++i) {
    for (std::size_t j = 1; j <= i - 1; ++j) {
      std::vector<Rational> r1 = zero(), r2 = zero();
      r1[pattern_var_index(i, j)] = 1;
      r1[pattern_var_index(i + 1, j)] = -1;
      P.rows.push_back({r1, Rational(0), "inner_interlace_hi"});
      r2[pattern_var_index(i + 1, j + 1)] = 1;
      r2[pattern_var_index(i, j)] = -1;
      P.rows.push_back({r2, Rational(0), "inner_interlace_lo"});
    }
  }

  // Eliminated diagonals decrease: sum_j x_{i+1,j} - sum_j x_{i,j} >= mu_{i+1}.
  for (std::size_t i = 1; i <= n - 2; ++i) {
    std::vector<Rational> r = zero();
    for (std::size_t j = 1; j <= i; ++j) r[pattern_var_index(i + 1, j)] = -1;
    for (std::size_t j = 1; j + 1 <= i; ++j) r[pattern_var_index(i, j)] += 1;
    P.rows.push_back({r, -mu.w[i], "diag_step"});
  }

  // x_{i+1,i} + sum_{j<i} x_{i,j} >= mu_1 + ... + mu_i.
  for (std::size_t i = 1; i <= n - 2; ++i) {
    std::vector<Rational> r = zero();
    r[pattern_var_index(i + 1, i)] = -1;
    for (std::size_t j = 1; j + 1 <= i; ++j) r[pattern_var_index(i, j)] -= 1;
    P.rows.push_back({r, -mu_prefix[i - 1], "diag_prefix"});
  }

  return P;
}

// Difference chart q(x) = (x_1 - x_n, ..., x_{n-1} - x_n): the tilt
// objective only depends on these coordinates.
inline std::vector<Rational> project_q(const std::vector<Rational>& x) {
  if (x.size() < 2) throw input_error("project_q: need at least 2 coordinates");
  std::vector<Rational> y(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) y[i] = x[i] - x.back();
  return y;
}

// Embedding (y, 0) used when optimizing over the difference chart.
inline std::vector<Rational> embed_q(const std::vector<Rational>& y) {
  std::vector<Rational> x(y);
  x.push_back(Rational(0));
  return x;
}

}  // namespace kostka
