#include "doctest.h"

#include "zplat/fp_linalg.hpp"
#include "zplat/random.hpp"

using namespace zplat;

namespace {

FpMatrix random_fp(Rng& rng, Eigen::Index m, Eigen::Index n, std::int64_t p) {
  FpMatrix a(m, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < m; ++i) a(i, j) = rng.uniform(0, p - 1);
  return a;
}

// Determinant by cofactor expansion, as an independent check.
std::int64_t det_cofactor(const FpMatrix& a, std::int64_t p) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 1;
  std::int64_t total = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    FpMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = a(r, c);
    const std::int64_t term = a(0, j) * det_cofactor(minor, p) % p;
    total = (total + (j % 2 ? p - term : term)) % p;
  }
  return total;
}

bool irreducible_brute(const fp::Poly& f, std::int64_t p) {
  // no monic factor of degree 1..deg/2, tried exhaustively
  const int d = fp::degree(f);
  for (int k = 1; 2 * k <= d; ++k) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(k), 0);
    while (true) {
      fp::Poly g(c.begin(), c.end());
      g.push_back(1);
      if (fp::divmod(f, g, p).second.empty()) return false;
      std::size_t pos = 0;
      while (pos < c.size() && ++c[pos] == p) c[pos++] = 0;
      if (pos == c.size()) break;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("rank, nullspace and solve over F_p") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::int64_t p = trial % 2 ? 2 : 3;
    const auto m = static_cast<Eigen::Index>(rng.uniform(1, 6));
    const auto n = static_cast<Eigen::Index>(rng.uniform(1, 6));
    const FpMatrix a = random_fp(rng, m, n, p);
    const FpMatrix k = fp::nullspace(a, p);
    CHECK(fp::rank(a, p) + k.cols() == n);
    CHECK(fp::multiply(a, k, p).isZero());
    const FpVector x = random_fp(rng, n, 1, p).col(0);
    const FpVector b = fp::multiply(a, x, p);
    auto sol = fp::solve(a, b, p);
    REQUIRE(sol);
    CHECK(fp::multiply(a, *sol, p) == b);
  }
}

TEST_CASE("inverse over F_p") {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::int64_t p = 5;
    const auto n = static_cast<Eigen::Index>(rng.uniform(1, 5));
    const FpMatrix a = random_fp(rng, n, n, p);
    auto inv = fp::inverse(a, p);
    CHECK(inv.has_value() == (det_cofactor(a, p) != 0));
    if (inv) CHECK(fp::multiply(a, *inv, p) == fp::identity(n));
  }
}

TEST_CASE("subspace coordinates") {
  Rng rng(9);
  const std::int64_t p = 3;
  fp::Subspace s(5, p);
  std::vector<FpVector> accepted;
  for (int k = 0; k < 8; ++k) {
    const FpVector v = random_fp(rng, 5, 1, p).col(0);
    if (s.insert(v)) accepted.push_back(v);
  }
  CHECK(s.dimension() == static_cast<Eigen::Index>(accepted.size()));
  FpVector target = FpVector::Zero(5);
  for (std::size_t j = 0; j < accepted.size(); ++j) target += static_cast<std::int64_t>(j + 1) * accepted[j];
  target = target.unaryExpr([p](std::int64_t x) { return x % p; });
  auto coords = s.coordinates(target);
  REQUIRE(coords);
  FpVector back = FpVector::Zero(5);
  for (std::size_t j = 0; j < accepted.size(); ++j) back += (*coords)(static_cast<Eigen::Index>(j)) * accepted[j];
  CHECK(back.unaryExpr([p](std::int64_t x) { return x % p; }) == target);
}

TEST_CASE("characteristic polynomial") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t p = trial % 2 ? 2 : 7;
    const auto n = static_cast<Eigen::Index>(rng.uniform(1, 5));
    const FpMatrix a = random_fp(rng, n, n, p);
    const fp::Poly f = fp::charpoly(a, p);
    REQUIRE(fp::degree(f) == n);
    CHECK(fp::evaluate(f, a, fp::identity(n), p).isZero());
    // constant term is (-1)^n det(a); check det(xI - a) at several x
    for (std::int64_t x = 0; x < p; ++x) {
      FpMatrix shifted = (-a).unaryExpr([p](std::int64_t v) { return ((v % p) + p) % p; });
      for (Eigen::Index i = 0; i < n; ++i) shifted(i, i) = (shifted(i, i) + x) % p;
      std::int64_t val = 0;
      for (std::size_t k = f.size(); k-- > 0;) val = (val * x + f[k]) % p;
      CHECK(val == det_cofactor(shifted, p));
    }
  }
}

TEST_CASE("polynomial factorization") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const std::int64_t p = trial % 3 == 0 ? 2 : (trial % 3 == 1 ? 3 : 5);
    fp::Poly f{1};
    const int pieces = static_cast<int>(rng.uniform(1, 4));
    for (int k = 0; k < pieces; ++k) {
      fp::Poly g(static_cast<std::size_t>(rng.uniform(1, 3)));
      for (auto& c : g) c = rng.uniform(0, p - 1);
      g.push_back(1);
      const int mult = static_cast<int>(rng.uniform(1, 3));
      for (int m = 0; m < mult; ++m) f = fp::mul(f, g, p);
    }
    const auto fac = fp::factor(f, p);
    fp::Poly back{1};
    for (const auto& [g, m] : fac) {
      CHECK(irreducible_brute(g, p));
      for (int i = 0; i < m; ++i) back = fp::mul(back, g, p);
    }
    CHECK(back == f);
    for (std::size_t i = 0; i + 1 < fac.size(); ++i) CHECK(fac[i].first != fac[i + 1].first);
  }
  // x^4 + x over F_2 = x (x + 1) (x^2 + x + 1)
  const auto fac = fp::factor(fp::Poly{0, 1, 0, 0, 1}, 2);
  REQUIRE(fac.size() == 3);
  CHECK(fac[2].first == fp::Poly{1, 1, 1});
}
