#include "doctest.h"
#include "oracles.hpp"

#include "zplat/error.hpp"
#include "zplat/padic_linalg.hpp"
#include "zplat/random.hpp"

using namespace zplat;

namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto n = m ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
  IntMatrix a(m, n);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (long v : r) a(i, j++) = v;
    ++i;
  }
  return a;
}

IntVector vec(std::initializer_list<long> xs) {
  IntVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (long x : xs) v(i++) = x;
  return v;
}

IntMatrix random_matrix(Rng& rng, Eigen::Index m, Eigen::Index n, std::int64_t bound) {
  IntMatrix a(m, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < m; ++i) a(i, j) = rng.uniform(-bound, bound);
  return a;
}

void check_smith(const IntMatrix& a, const PrecisionContext& ctx) {
  const SmithDetail d = local_smith(a, ctx, SmithOptions{true, true, true});
  const LocalSmithForm& f = d.form;
  CHECK(multiply(multiply(f.U, a), f.V) == f.D);
  CHECK(multiply(f.U, d.U_inverse) == identity_matrix(a.rows()));
  CHECK(det_is_p_unit(f.U, ctx.p()));
  CHECK(det_is_p_unit(f.V, ctx.p()));
  for (Eigen::Index i = 0; i < f.D.rows(); ++i)
    for (Eigen::Index j = 0; j < f.D.cols(); ++j)
      if (i != j) CHECK(f.D(i, j).is_zero());
  for (std::size_t i = 0; i + 1 < f.elementary_exponents.size(); ++i)
    CHECK(f.elementary_exponents[i] <= f.elementary_exponents[i + 1]);
  // exponents agree with the valuations of the textbook invariant factors
  const auto inv = oracle::smith_invariants(a);
  REQUIRE(inv.size() == f.elementary_exponents.size());
  for (std::size_t i = 0; i < inv.size(); ++i) CHECK(valuation(inv[i], ctx.p()) == f.elementary_exponents[i]);
}

}  // namespace

TEST_CASE("local_smith of diag(4,6) at 2 has exponents 1 and 2") {
  const PrecisionContext ctx(2);
  const IntMatrix a = mat({{4, 0}, {0, 6}});
  const auto inv = oracle::smith_invariants(a);
  REQUIRE(inv.size() == 2);
  CHECK(inv[0] == 2);
  CHECK(inv[1] == 12);
  const LocalSmithForm f = local_smith(a, ctx);
  CHECK(f.elementary_exponents == std::vector<int>{1, 2});
  check_smith(a, ctx);
}

TEST_CASE("local_smith of the identity is trivial") {
  for (std::int64_t p : {2, 3, 5}) {
    const LocalSmithForm f = local_smith(identity_matrix(3), PrecisionContext(p));
    CHECK(f.elementary_exponents == std::vector<int>{0, 0, 0});
    CHECK(f.U == identity_matrix(3));
    CHECK(f.V == identity_matrix(3));
  }
}

TEST_CASE("local_smith of a zero matrix has rank zero") {
  const LocalSmithForm f = local_smith(IntMatrix::Zero(2, 3), PrecisionContext(3));
  CHECK(f.elementary_exponents.empty());
  CHECK(f.rank() == 0);
}

TEST_CASE("local_smith invariants on random matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::int64_t p = trial % 3 == 0 ? 2 : (trial % 3 == 1 ? 3 : 5);
    const auto m = static_cast<Eigen::Index>(rng.uniform(1, 6));
    const auto n = static_cast<Eigen::Index>(rng.uniform(1, 6));
    IntMatrix a = random_matrix(rng, m, n, 12);
    if (trial % 4 == 0) a.col(0) = a.col(n - 1) * Integer(p);
    check_smith(a, PrecisionContext(p));
  }
}

TEST_CASE("local_smith survives 64-bit overflow") {
  IntMatrix a = mat({{1, 0}, {0, 1}});
  a(0, 0) = Integer("123456789012345678901234567890");
  a(0, 1) = Integer("98765432109876543210987654321");
  a(1, 0) = Integer("-5555555555555555555555555555");
  a(1, 1) = Integer(8);
  check_smith(a, PrecisionContext(2));
}

TEST_CASE("solve_local examples") {
  const PrecisionContext ctx(2);
  auto x = solve_local(mat({{2, 0}, {0, 1}}), vec({2, 3}), ctx);
  REQUIRE(x);
  CHECK(x->denominator == 1);
  CHECK(x->numerator == vec({1, 3}));

  CHECK_FALSE(solve_local(mat({{2}}), vec({1}), ctx));

  auto third = solve_local(mat({{3}}), vec({1}), ctx);
  REQUIRE(third);
  CHECK(third->denominator == 3);
  const IntVector approx = third->approx(ctx);
  CHECK(((3 * approx(0) - 1) % ctx.modulus()).is_zero());
}

TEST_CASE("solve_local substitutes back exactly") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const PrecisionContext ctx(trial % 2 ? 3 : 2);
    const auto m = static_cast<Eigen::Index>(rng.uniform(1, 5));
    const auto n = static_cast<Eigen::Index>(rng.uniform(1, 5));
    const IntMatrix a = random_matrix(rng, m, n, 9);
    const IntVector b = a * random_matrix(rng, n, 1, 5).col(0);
    auto x = solve_local(a, b, ctx);
    REQUIRE(x);
    CHECK(a * x->numerator == b * x->denominator);
    CHECK(is_p_unit(x->denominator, ctx.p()));
  }
}

TEST_CASE("kernel_local examples") {
  const PrecisionContext ctx(2);
  CHECK(kernel_local(mat({{1, 1}}), ctx) == mat({{1}, {-1}}));
  CHECK(kernel_local(identity_matrix(3), ctx).cols() == 0);
  CHECK(kernel_local(mat({{2, 2}}), ctx) == mat({{1}, {-1}}));
}

TEST_CASE("kernel_local is exact and saturated") {
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const PrecisionContext ctx(trial % 2 ? 2 : 3);
    const auto m = static_cast<Eigen::Index>(rng.uniform(1, 4));
    const auto n = static_cast<Eigen::Index>(rng.uniform(2, 6));
    IntMatrix a = random_matrix(rng, m, n, 6) * Integer(ctx.p());
    const IntMatrix k = kernel_local(a, ctx);
    CHECK(k.cols() == n - rank_exact(a));
    CHECK(multiply(a, k).isZero());
    CHECK(rank_mod_p(k, ctx.p()) == k.cols());
    CHECK(saturate(k, n, ctx) == k);
  }
}

TEST_CASE("saturate examples") {
  const PrecisionContext ctx(2);
  CHECK(saturate(mat({{2}, {2}}), 2, ctx) == mat({{1}, {1}}));
  const IntMatrix s = mat({{1}, {1}});
  CHECK(saturate(s, 2, ctx) == s);
  const IntMatrix two = mat({{2, 0}, {0, 3}});
  const IntMatrix sat = saturate(two, 2, ctx);
  CHECK(same_span(sat, oracle::p_saturation(two, 2), ctx));
  CHECK(sat == identity_matrix(2));
}

TEST_CASE("saturate is idempotent, monotone and matches the p-saturation oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const PrecisionContext ctx(trial % 2 ? 2 : 3);
    const auto n = static_cast<Eigen::Index>(rng.uniform(2, 5));
    const auto k = static_cast<Eigen::Index>(rng.uniform(1, n));
    IntMatrix s = random_matrix(rng, n, k, 4);
    s.col(0) *= Integer(ctx.p() * ctx.p());
    if (rank_exact(s) < k) continue;
    const IntMatrix sat = saturate(s, n, ctx);
    CHECK(saturate(sat, n, ctx) == sat);
    CHECK(contains_span(sat, s, ctx));
    CHECK(same_span(sat, oracle::p_saturation(s, ctx.p()), ctx));
  }
}

TEST_CASE("coordinates, complements and inverses") {
  Rng rng(19);
  const PrecisionContext ctx(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<Eigen::Index>(rng.uniform(1, 6));
    const Scramble sc = random_unimodular(n, rng);
    CHECK(multiply(sc.S, sc.S_inverse) == identity_matrix(n));
    CHECK(inverse_unimodular(sc.S) == sc.S_inverse);
    CHECK(determinant(sc.S) * determinant(sc.S) == 1);
    const auto k = static_cast<Eigen::Index>(rng.uniform(0, n));
    const IntMatrix w = sc.S.leftCols(k);
    IntMatrix full(n, n);
    full << w, complement_basis(w);
    CHECK(abs(determinant(full)) == 1);
    const IntMatrix c = random_matrix(rng, k, 3, 5);
    auto coords = coordinates_in(w, multiply(w, c));
    REQUIRE(coords);
    CHECK(*coords == c);
  }
  const LocalInverse inv = inverse_local(mat({{3, 0}, {1, 1}}), ctx);
  CHECK(multiply(mat({{3, 0}, {1, 1}}), inv.numerator) == identity_matrix(2) * inv.denominator);
  CHECK_THROWS_AS(inverse_local(mat({{2, 0}, {0, 1}}), ctx), Error);
}

TEST_CASE("determinant matches a hand expansion") {
  CHECK(determinant(mat({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}})) == 18);
  CHECK(determinant(mat({{0, 1}, {1, 0}})) == -1);
  CHECK(determinant(mat({{1, 2}, {2, 4}})) == 0);
}

TEST_CASE("precision context validation") {
  CHECK_THROWS_AS(PrecisionContext(4), Error);
  CHECK_THROWS_AS(PrecisionContext(2, 0), Error);
  CHECK(PrecisionContext(3, 2).modulus() == 9);
}
