#include "kostka/domain.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "test_oracles.hpp"

using namespace kostka;

namespace {

Partition P(std::initializer_list<long> v) {
  std::vector<Rational> r;
  for (long x : v) r.emplace_back(x);
  return Partition(std::move(r));
}

Weight W(std::initializer_list<long> v) {
  std::vector<Rational> r;
  for (long x : v) r.emplace_back(x);
  return Weight(std::move(r));
}

bool satisfies(const HalfspacePolytope& poly, const std::vector<Rational>& x) {
  REQUIRE(x.size() == poly.dim);
  for (const auto& row : poly.rows) {
    if (dot(row.a, x) > row.b) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("partition validation and gaps") {
  CHECK_THROWS_AS(Partition({Rational(1)}), input_error);
  CHECK_THROWS_AS(P({1, 2, 3}), input_error);
  CHECK(P({3, 1, 0}).min_gap() == 1);
  CHECK(P({5, 2, 0}).min_gap() == 2);
  CHECK(P({2, 2, 1}).min_gap() == 0);
  CHECK(P({4, 2, 1}).total() == 7);
  CHECK(P({4, 2, 1}).is_integral());
  Partition half({Rational(1), Rational(1, 2), Rational(0)});
  CHECK_FALSE(half.is_integral());
  CHECK(half.min_gap() == Rational(1, 2));
}

TEST_CASE("majorization order") {
  CHECK(majorizes(P({2, 1, 0}), W({1, 1, 1})));
  CHECK(majorizes(P({2, 1, 0}), W({2, 1, 0})));
  CHECK(majorizes(P({2, 1, 0}), W({0, 1, 2})));  // order of mu is irrelevant
  CHECK_FALSE(majorizes(P({2, 1, 0}), W({3, 0, 0})));
  CHECK_FALSE(majorizes(P({2, 1, 0}), W({1, 1, 0})));  // totals differ
  CHECK(strictly_inside(P({2, 1, 0}), W({1, 1, 1})));
  CHECK_FALSE(strictly_inside(P({2, 1, 0}), W({2, 1, 0})));
  CHECK_FALSE(strictly_inside(P({3, 1, 0}), W({2, 2, 0})));  // top-2 sum ties
  CHECK(majorizes(P({3, 1, 0}), W({2, 2, 0})));
}

TEST_CASE("instance construction rejects bad input") {
  CHECK_NOTHROW(Instance(P({2, 1, 0}), W({1, 1, 1})));
  CHECK_THROWS_AS(Instance(P({2, 1, 0}), W({1, 1})), input_error);
  CHECK_THROWS_AS(Instance(P({2, 1, 0}), W({1, 1, 0})), input_error);
  CHECK_THROWS_AS(Instance(P({2, 1, 0}), W({3, 0, 0})), input_error);
}

TEST_CASE("normalization scales gaps and shifts above one") {
  SECTION("integral instance only shifts") {
    NormalizedInstance ni = normalize(Instance(P({2, 1, 0}), W({1, 1, 1})));
    CHECK(ni.beta == 1);
    CHECK(ni.alpha == 1);
    CHECK(ni.lambda.parts == std::vector<Rational>{3, 2, 1});
    CHECK(ni.mu.w == std::vector<Rational>{2, 2, 2});
    CHECK(ni.volume_factor() == 1);
  }
  SECTION("fractional gaps scale up") {
    Partition l({Rational(1), Rational(1, 2), Rational(0)});
    Weight m({Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    NormalizedInstance ni = normalize(Instance(l, m));
    CHECK(ni.beta == 2);
    CHECK(ni.alpha == 1);
    CHECK(ni.lambda.parts == std::vector<Rational>{3, 2, 1});
    CHECK(ni.mu.w == std::vector<Rational>{2, 2, 2});
    CHECK(ni.volume_factor() == Rational(1, 2));  // dim 1, beta 2
  }
  SECTION("already normalized instances pass through") {
    NormalizedInstance ni = normalize(Instance(P({5, 3, 1}), W({3, 3, 3})));
    CHECK(ni.beta == 1);
    CHECK(ni.alpha == 0);
    CHECK(ni.lambda.parts == std::vector<Rational>{5, 3, 1});
  }
  SECTION("repeated parts cannot be normalized") {
    CHECK_THROWS_AS(normalize(Instance(P({1, 1, 0}), W({1, 1, 0}))), degenerate_error);
  }
  SECTION("normalized gap and floor invariants hold on fuzzed instances") {
    testref::RationalFuzz fuzz(777);
    for (int t = 0; t < 40; ++t) {
      std::size_t n = 3 + static_cast<std::size_t>(t % 3);
      std::vector<Rational> parts(n);
      Rational acc = 0;
      for (std::size_t i = n; i-- > 0;) {
        parts[i] = acc;
        acc += fuzz.positive(9, 7);
      }
      Partition l(parts);
      Weight m(std::vector<Rational>(n, l.total() / Integer(n)));
      NormalizedInstance ni = normalize(Instance(l, m));
      CHECK(ni.lambda.min_gap() >= 1);
      CHECK(ni.lambda.parts.back() >= 1);
      CHECK(ni.mu.total() == ni.lambda.total());
    }
  }
}

TEST_CASE("projected pattern polytope has the expected facet structure") {
  SECTION("row count by family") {
    for (std::size_t n = 3; n <= 6; ++n) {
      std::vector<Rational> lam(n), mu(n);
      for (std::size_t i = 0; i < n; ++i) lam[i] = Rational(Integer(2 * (n - i)));
      Rational mean = Partition(lam).total() / Integer(n);
      for (std::size_t i = 0; i < n; ++i) mu[i] = mean;
      HalfspacePolytope poly = build_ptilde(Partition(lam), Weight(mu));
      CHECK(poly.dim == (n - 1) * (n - 2) / 2);
      std::size_t expected = 2 + 2 * (n - 2) + (n - 2) * (n - 3) + 2 * (n - 2);
      CHECK(poly.rows.size() == expected);
      for (const auto& row : poly.rows) CHECK(row.a.size() == poly.dim);
    }
  }
  SECTION("the one-dimensional canonical slice is the unit segment") {
    HalfspacePolytope poly = build_ptilde(P({2, 1, 0}), W({1, 1, 1}));
    REQUIRE(poly.dim == 1);
    // Intersect all rows down to a segment [lo, hi] by hand.
    Rational lo(-1000), hi(1000);
    for (const auto& row : poly.rows) {
      REQUIRE(row.a.size() == 1);
      if (row.a[0] > 0) hi = std::min(hi, Rational(row.b / row.a[0]));
      else if (row.a[0] < 0) lo = std::max(lo, Rational(row.b / row.a[0]));
      else CHECK(row.b >= 0);
    }
    CHECK(lo == 1);
    CHECK(hi == 2);
    CHECK(satisfies(poly, {Rational(1)}));
    CHECK(satisfies(poly, {Rational(2)}));
    CHECK(satisfies(poly, {Rational(3, 2)}));
    CHECK_FALSE(satisfies(poly, {Rational(1) - Rational(1, 100)}));
    CHECK_FALSE(satisfies(poly, {Rational(2) + Rational(1, 100)}));
  }
  SECTION("membership matches a hand-built pattern for n = 4") {
    // lambda = (3,2,1,0), mu = (2,2,1,1): row sums (2,4,5), pattern rows
    // (2.5) over top, explicitly x2 = (2.5, 1.5), x3 = (2.6, 1.6, 0.8)
    // with x21 perturbed into the interior.
    HalfspacePolytope poly = build_ptilde(P({3, 2, 1, 0}), W({2, 2, 1, 1}));
    REQUIRE(poly.dim == 3);
    std::vector<Rational> interior = {Rational(5, 2), Rational(13, 5), Rational(8, 5)};
    CHECK(satisfies(poly, interior));
    // Pushing the second-row free entry past its upper neighbor breaks
    // the interlacing family.
    std::vector<Rational> bad1 = {Rational(27, 10), Rational(13, 5), Rational(8, 5)};
    CHECK_FALSE(satisfies(poly, bad1));
    // An entry of row n-1 above lambda_2 breaks the top interlacing.
    std::vector<Rational> bad2 = {Rational(5, 2), Rational(13, 5), Rational(21, 10)};
    CHECK_FALSE(satisfies(poly, bad2));
    // Draining the last-row free sum below mu-prefix minus lambda_2
    // breaks the eliminated-diagonal bound.
    std::vector<Rational> bad3 = {Rational(5, 2), Rational(21, 10), Rational(11, 10)};
    CHECK_FALSE(satisfies(poly, bad3));
  }
  SECTION("integer slice of the canonical polytope has K points") {
    // lambda = (2,1,0), mu = (1,1,1): the integer points of [1,2] are
    // x = 1 and x = 2, matching the two tableaux of that shape/content.
    HalfspacePolytope poly = build_ptilde(P({2, 1, 0}), W({1, 1, 1}));
    int count = 0;
    for (long v = -5; v <= 5; ++v)
      if (satisfies(poly, {Rational(v)})) ++count;
    CHECK(count == 2);
  }
}

TEST_CASE("difference chart projection and embedding") {
  std::vector<Rational> x = {Rational(5), Rational(3), Rational(2)};
  std::vector<Rational> y = project_q(x);
  CHECK(y == std::vector<Rational>{3, 1});
  CHECK(embed_q(y) == std::vector<Rational>{3, 1, 0});
  CHECK(project_q(embed_q(y)) == y);
  // Projection kills the diagonal direction.
  std::vector<Rational> shifted = {Rational(6), Rational(4), Rational(3)};
  CHECK(project_q(shifted) == y);
}
