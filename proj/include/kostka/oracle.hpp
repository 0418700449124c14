#pragma once

// Desk-scale ground truth, independent of the certified pipeline:
// exact lattice-point counts, exact polytope volumes, semiclassical
// scaling checks, and a log-concavity probe. Everything here is exact
// rational arithmetic; nothing is shared with the estimator beyond the
// domain types.

#include "kostka/certified.hpp"
#include "kostka/domain.hpp"

#include <map>
#include <optional>
#include <set>

namespace kostka {

// V-representation produced by vertex enumeration. Vertices are basic
// feasible solutions, hence extreme points: the list is irredundant.
struct VertexPolytope {
  std::size_t dim = 0;
  std::vector<std::vector<Rational>> vertices;
};

namespace detail {

// Gaussian elimination solve of M x = rhs; empty when M is singular.
inline std::optional<std::vector<Rational>> solve_square(
    std::vector<std::vector<Rational>> M, std::vector<Rational> rhs) {
  const std::size_t d = rhs.size();
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && M[piv][col] == 0) ++piv;
    if (piv == d) return std::nullopt;
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < d; ++r) {
      if (M[r][col] == 0) continue;
      Rational f = M[r][col] / M[col][col];
      for (std::size_t c = col; c < d; ++c) M[r][c] -= f * M[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rational> x(d);
  for (std::size_t col = d; col-- > 0;) {
    Rational acc = rhs[col];
    for (std::size_t c = col + 1; c < d; ++c) acc -= M[col][c] * x[c];
    x[col] = acc / M[col][col];
  }
  return x;
}

inline std::size_t matrix_rank(std::vector<std::vector<Rational>> M) {
  if (M.empty()) return 0;
  const std::size_t cols = M[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < M.size(); ++col) {
    std::size_t piv = rank;
    while (piv < M.size() && M[piv][col] == 0) ++piv;
    if (piv == M.size()) continue;
    std::swap(M[piv], M[rank]);
    for (std::size_t r = rank + 1; r < M.size(); ++r) {
      if (M[r][col] == 0) continue;
      Rational f = M[r][col] / M[rank][col];
      for (std::size_t c = col; c < cols; ++c) M[r][c] -= f * M[rank][c];
    }
    ++rank;
  }
  return rank;
}

// One-dimensional kernel direction of a (d-1) x d matrix of full row
// rank; empty when the rank is deficient.
inline std::optional<std::vector<Rational>> kernel_direction(
    std::vector<std::vector<Rational>> M, std::size_t d) {
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < d && rank < M.size(); ++col) {
    std::size_t piv = rank;
    while (piv < M.size() && M[piv][col] == 0) ++piv;
    if (piv == M.size()) continue;
    std::swap(M[piv], M[rank]);
    for (std::size_t r = 0; r < M.size(); ++r) {
      if (r == rank || M[r][col] == 0) continue;
      Rational f = M[r][col] / M[rank][col];
      for (std::size_t c = col; c < d; ++c) M[r][c] -= f * M[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank != M.size()) return std::nullopt;
  std::vector<bool> is_pivot(d, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::size_t free_col = d;
  for (std::size_t c = 0; c < d; ++c)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  if (free_col == d) return std::nullopt;
  std::vector<Rational> y(d, Rational(0));
  y[free_col] = 1;
  for (std::size_t r = rank; r-- > 0;) {
    y[pivot_col[r]] = -M[r][free_col] / M[r][pivot_col[r]];
  }
  return y;
}

// Fourier-Motzkin feasibility of A x <= b; only used on the rare
// rank-deficient path, with a hard cap on intermediate rows.
inline bool feasible_fm(std::vector<std::vector<Rational>> A, std::vector<Rational> b,
                        std::size_t d) {
  for (std::size_t var = 0; var < d; ++var) {
    std::vector<std::vector<Rational>> pos, neg, zer;
    std::vector<Rational> posb, negb, zerb;
    for (std::size_t r = 0; r < A.size(); ++r) {
      if (A[r][var] > 0) {
        pos.push_back(A[r]);
        posb.push_back(b[r]);
      } else if (A[r][var] < 0) {
        neg.push_back(A[r]);
        negb.push_back(b[r]);
      } else {
        zer.push_back(A[r]);
        zerb.push_back(b[r]);
      }
    }
    std::vector<std::vector<Rational>> next = zer;
    std::vector<Rational> nextb = zerb;
    for (std::size_t p = 0; p < pos.size(); ++p)
      for (std::size_t q = 0; q < neg.size(); ++q) {
        std::vector<Rational> row(A[0].size());
        Rational fp = pos[p][var], fq = -neg[q][var];
        for (std::size_t c = 0; c < row.size(); ++c)
          row[c] = pos[p][c] * fq + neg[q][c] * fp;
        next.push_back(std::move(row));
        nextb.push_back(posb[p] * fq + negb[q] * fp);
      }
    if (next.size() > 200000) throw resource_error("feasible_fm: row blowup");
    A = std::move(next);
    b = std::move(nextb);
  }
  for (const auto& c : b)
    if (c < 0) return false;
  return true;
}

// Visit all size-k index subsets of {0..m-1}.
template <typename F>
inline void for_each_subset(std::size_t m, std::size_t k, F&& fn) {
  if (k > m) return;
  if (k == 0) {
    std::vector<std::size_t> empty;
    fn(empty);
    return;
  }
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i-- > 0) {
      if (idx[i] + (k - i) < m) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

}  // namespace detail

// All basic feasible solutions: every size-dim subset of rows is solved
// exactly and kept when it satisfies the full system.
inline VertexPolytope enumerate_vertices(const HalfspacePolytope& H) {
  VertexPolytope out;
  out.dim = H.dim;
  const std::size_t d = H.dim, m = H.rows.size();
  if (d == 0) return out;
  std::set<std::vector<Rational>> seen;
  detail::for_each_subset(m, d, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::vector<Rational>> M(d);
    std::vector<Rational> rhs(d);
    for (std::size_t i = 0; i < d; ++i) {
      M[i] = H.rows[idx[i]].a;
      rhs[i] = H.rows[idx[i]].b;
    }
    auto x = detail::solve_square(std::move(M), std::move(rhs));
    if (!x) return;
    for (const auto& row : H.rows)
      if (dot(row.a, *x) > row.b) return;
    seen.insert(std::move(*x));
  });
  out.vertices.assign(seen.begin(), seen.end());
  return out;
}

// A nonzero direction of recession (A y <= 0), if one exists. Pointed
// cones are covered by (dim-1)-subset kernel directions; the caller
// handles the rank-deficient (line-containing) case separately.
inline std::optional<std::vector<Rational>> recession_ray(const HalfspacePolytope& H) {
  const std::size_t d = H.dim, m = H.rows.size();
  if (d == 0) return std::nullopt;
  std::optional<std::vector<Rational>> found;
  detail::for_each_subset(m, d - 1, [&](const std::vector<std::size_t>& idx) {
    if (found) return;
    std::vector<std::vector<Rational>> M;
    M.reserve(d - 1);
    for (std::size_t i : idx) M.push_back(H.rows[i].a);
    std::optional<std::vector<Rational>> y;
    if (d == 1) {
      y = std::vector<Rational>{Rational(1)};
    } else {
      y = detail::kernel_direction(std::move(M), d);
    }
    if (!y) return;
    auto ok = [&](const std::vector<Rational>& v) {
      for (const auto& row : H.rows)
        if (dot(row.a, v) > 0) return false;
      return true;
    };
    if (ok(*y)) {
      found = *y;
      return;
    }
    for (auto& c : *y) c = -c;
    if (ok(*y)) found = *y;
  });
  return found;
}

namespace detail {

inline Rational volume_rec(const HalfspacePolytope& H) {
  const std::size_t d = H.dim;
  if (d == 0) {
    for (const auto& row : H.rows)
      if (row.b < 0) return 0;
    return 1;
  }
  if (d == 1) {
    // Clip to a segment.
    bool has_hi = false, has_lo = false;
    Rational hi, lo;
    for (const auto& row : H.rows) {
      if (row.a[0] > 0) {
        Rational v = row.b / row.a[0];
        if (!has_hi || v < hi) hi = v;
        has_hi = true;
      } else if (row.a[0] < 0) {
        Rational v = row.b / row.a[0];
        if (!has_lo || v > lo) lo = v;
        has_lo = true;
      } else if (row.b < 0) {
        return 0;
      }
    }
    if (!has_hi || !has_lo) throw input_error("exact_volume: unbounded polytope");
    return hi > lo ? Rational(hi - lo) : Rational(0);
  }

  VertexPolytope V = enumerate_vertices(H);
  if (V.vertices.size() < d + 1) return 0;
  std::vector<Rational> c(d, Rational(0));
  for (const auto& v : V.vertices)
    for (std::size_t i = 0; i < d; ++i) c[i] += v[i];
  for (auto& x : c) x /= Integer(V.vertices.size());

  // Cone the (projected) facets from the centroid. Duplicate rows would
  // double-count a facet, so hyperplanes are keyed by a scaled form.
  std::set<std::pair<std::vector<Rational>, Rational>> seen;
  Rational vol = 0;
  for (std::size_t r = 0; r < H.rows.size(); ++r) {
    const auto& row = H.rows[r];
    std::size_t pivot = d;
    for (std::size_t i = 0; i < d; ++i)
      if (row.a[i] != 0 && (pivot == d || abs(row.a[i]) > abs(row.a[pivot]))) pivot = i;
    if (pivot == d) continue;  // constant row
    Rational dist = row.b - dot(row.a, c);
    if (dist <= 0) continue;  // redundant or through the centroid
    {
      std::vector<Rational> key = row.a;
      Rational scale = row.a[pivot];
      for (auto& x : key) x /= scale;
      if (!seen.insert({std::move(key), Rational(row.b / scale)}).second) continue;
    }
    // Substitute x_pivot out of every other row: the facet projects to a
    // polytope one dimension down, with volume scaled by |a_pivot|.
    HalfspacePolytope sub;
    sub.dim = d - 1;
    for (std::size_t s = 0; s < H.rows.size(); ++s) {
      if (s == r) continue;
      const auto& other = H.rows[s];
      Rational f = other.a[pivot] / row.a[pivot];
      HalfspaceRow nr;
      nr.a.reserve(d - 1);
      for (std::size_t i = 0; i < d; ++i) {
        if (i == pivot) continue;
        nr.a.push_back(other.a[i] - f * row.a[i]);
      }
      nr.b = other.b - f * row.b;
      nr.label = other.label;
      sub.rows.push_back(std::move(nr));
    }
    vol += dist / abs(row.a[pivot]) * volume_rec(sub) / Integer(d);
  }
  return vol;
}

}  // namespace detail

// Exact Lebesgue volume of a bounded H-polytope. Unbounded input is an
// error; empty or lower-dimensional input has volume zero.
inline Rational exact_volume(const HalfspacePolytope& H, std::size_t max_dim = 6) {
  if (H.dim > max_dim) throw resource_error("exact_volume: dimension over cap");
  if (H.dim == 0) return detail::volume_rec(H);
  std::vector<std::vector<Rational>> A;
  A.reserve(H.rows.size());
  for (const auto& row : H.rows) A.push_back(row.a);
  if (detail::matrix_rank(A) < H.dim) {
    // The recession cone contains a line; only an empty polytope escapes.
    std::vector<Rational> b;
    for (const auto& row : H.rows) b.push_back(row.b);
    if (A.empty() || detail::feasible_fm(A, b, H.dim))
      throw input_error("exact_volume: unbounded polytope");
    return 0;
  }
  if (H.dim == 1) return detail::volume_rec(H);
  VertexPolytope V = enumerate_vertices(H);
  if (V.vertices.empty()) return 0;  // pointed and vertex-free means empty
  if (recession_ray(H)) throw input_error("exact_volume: unbounded polytope");
  return detail::volume_rec(H);
}

// Exact number of integral triangular patterns with top row lambda and
// row sums running over the prefix sums of mu. Non-integral input or a
// weight outside the permutohedron simply counts zero.
inline Integer kostka_count(const Partition& lambda, const Weight& mu) {
  const std::size_t n = lambda.n();
  if (mu.n() != n) return 0;
  if (!lambda.is_integral()) return 0;
  for (const auto& x : mu.w)
    if (!is_integer(x)) return 0;
  if (lambda.total() != mu.total()) return 0;
  if (abs(num(lambda.parts[0])) > (Integer(1) << 40) ||
      abs(num(lambda.parts.back())) > (Integer(1) << 40))
    throw resource_error("kostka_count: entries too large");

  std::vector<long> top(n);
  for (std::size_t i = 0; i < n; ++i)
    top[i] = static_cast<long>(num(lambda.parts[i]));
  std::vector<long> target(n);  // row of length L sums to target[L-1]
  long acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<long>(num(mu.w[i]));
    target[i] = acc;
  }

  std::map<std::vector<long>, Integer> memo;

  // Count completions below `row`; enumeration of the next row walks
  // entries left to right with suffix-sum pruning.
  auto count = [&](auto&& self, const std::vector<long>& row) -> Integer {
    const std::size_t L = row.size();
    if (L == 1) return 1;
    auto it = memo.find(row);
    if (it != memo.end()) return it->second;
    const long want = target[L - 2];
    // Suffix bounds for entries j..L-2 of the next row.
    std::vector<long> lo_suf(L), hi_suf(L);
    lo_suf[L - 1] = hi_suf[L - 1] = 0;
    for (std::size_t j = L - 1; j-- > 0;) {
      lo_suf[j] = lo_suf[j + 1] + row[j + 1];
      hi_suf[j] = hi_suf[j + 1] + row[j];
    }
    Integer total = 0;
    std::vector<long> next(L - 1);
    auto walk = [&](auto&& inner, std::size_t j, long partial) -> void {
      if (j == L - 1) {
        total += self(self, next);
        return;
      }
      long rem = want - partial;
      long lo = std::max(row[j + 1], rem - hi_suf[j + 1]);
      long hi = std::min(row[j], rem - lo_suf[j + 1]);
      for (long e = lo; e <= hi; ++e) {
        next[j] = e;
        inner(inner, j + 1, partial + e);
      }
    };
    walk(walk, 0, 0);
    memo.emplace(row, total);
    return total;
  };
  return count(count, top);
}

struct ExactKostkaVolume {
  Rational vtilde;  // Lebesgue volume of the projected polytope
  Interval v;       // Hausdorff volume: vtilde * sqrt((n-1)!)
};

inline ExactKostkaVolume exact_kostka_volume(const Instance& inst, std::size_t max_dim = 6) {
  ExactKostkaVolume out;
  out.vtilde = exact_volume(build_ptilde(inst.lambda, inst.mu), max_dim);
  out.v = sqrt_factorial_interval(static_cast<unsigned>(inst.n() - 1)) * out.vtilde;
  return out;
}

// Lattice-point density of the N-fold dilation: K_{N lambda, N mu} / N^d
// tends to the projected volume as N grows.
inline Rational scaling_limit(const Instance& inst, unsigned long N) {
  if (N == 0) throw input_error("scaling_limit: N must be positive");
  std::vector<Rational> l, m;
  for (const auto& p : inst.lambda.parts) l.push_back(p * Integer(N));
  for (const auto& x : inst.mu.w) m.push_back(x * Integer(N));
  Integer count = kostka_count(Partition(std::move(l)), Weight(std::move(m)));
  long d = static_cast<long>((inst.n() - 1) * (inst.n() - 2) / 2);
  return Rational(count) / pow_int(Integer(N), static_cast<unsigned long>(d));
}

struct LogConcavityReport {
  std::size_t checked = 0;
  bool holds = true;
  Rational worst_margin;  // min of mid^2 - lo*hi over checked triples
};

// Volume log-concavity along the segment [mu_a, mu_b] inside the
// permutohedron: vol(midpoint)^2 >= vol(left) * vol(right) at `steps`
// interior points, all with exact volumes.
inline LogConcavityReport logconcavity_probe(const Partition& lambda, const Weight& mu_a,
                                             const Weight& mu_b, unsigned steps,
                                             std::size_t max_dim = 6) {
  if (!majorizes(lambda, mu_a) || !majorizes(lambda, mu_b))
    throw input_error("logconcavity_probe: endpoint outside the permutohedron");
  if (steps < 2) throw input_error("logconcavity_probe: need at least 2 steps");
  auto blend = [&](const Rational& t) {
    std::vector<Rational> v(mu_a.n());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = mu_a.w[i] * (1 - t) + mu_b.w[i] * t;
    return Weight(std::move(v));
  };
  std::vector<Rational> vols(steps + 1);
  for (unsigned k = 0; k <= steps; ++k) {
    Weight mu_t = blend(Rational(k, steps));
    vols[k] = exact_volume(build_ptilde(lambda, mu_t), max_dim);
  }
  LogConcavityReport rep;
  bool first = true;
  for (unsigned k = 1; k < steps; ++k) {
    Rational margin = vols[k] * vols[k] - vols[k - 1] * vols[k + 1];
    if (first || margin < rep.worst_margin) rep.worst_margin = margin;
    first = false;
    if (margin < 0) rep.holds = false;
    ++rep.checked;
  }
  return rep;
}

}  // namespace kostka
